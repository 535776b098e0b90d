import { TrustnetClient } from "./api.js";
import { CoefficientsPanel } from "./coefficients.js";
import { QuarantinePanel } from "./quarantine.js";
import { SearchController } from "./search.js";
import { TrustSliderPanel } from "./sliders.js";
import type { QuarantineRecord, RankedResult, Session } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text !== undefined) node.textContent = text;
  return node;
}

/** Assemble the signed-in application inside `root`. */
export function buildApp(client: TrustnetClient, session: Session, root: HTMLElement): void {
  root.textContent = "";
  root.append(
    el("header", { class: "topbar" }, `signed in as ${session.user} (${session.role})`),
  );

  // -- contacts with trust sliders -----------------------------------------
  const contactsBox = el("section", { class: "panel contacts" });
  contactsBox.append(el("h2", {}, "contacts"));
  const contactList = el("div", { class: "contact-list" });
  contactsBox.append(contactList);
  root.append(contactsBox);

  const sliderRows = new Map<string, { slider: HTMLInputElement; badge: HTMLElement; note: HTMLElement }>();
  const sliders = new TrustSliderPanel(client, {
    display(contact, value) {
      const row = sliderRows.get(contact);
      if (!row) return;
      row.slider.value = value;
      row.badge.textContent = `${value}%`;
      row.note.textContent = "";
    },
    error(contact, message) {
      const row = sliderRows.get(contact);
      if (row) row.note.textContent = message;
    },
  });

  void client.contacts().then(({ experts }) => {
    for (const contact of experts) {
      const row = el("div", { class: "contact-row" });
      const name = el("span", { class: "contact-name" }, contact);
      const slider = el("input", {
        type: "range", min: "0", max: "100", step: "0.01", value: "50",
      });
      const badge = el("span", { class: "trust-badge" }, "");
      const note = el("span", { class: "note" }, "");
      slider.addEventListener("change", () => {
        void sliders.commit(contact, slider.value);
      });
      row.append(name, slider, badge, note);
      contactList.append(row);
      sliderRows.set(contact, { slider, badge, note });
      void sliders.load(contact);
    }
  });

  // -- search with infinite scroll -------------------------------------------
  const searchBox = el("section", { class: "panel search" });
  searchBox.append(el("h2", {}, "search"));
  const queryInput = el("input", { type: "text", placeholder: "keywords" });
  const modeButton = el("button", {}, "mode: static");
  const goButton = el("button", {}, "search");
  const fromInput = el("input", { type: "text", placeholder: "from (ISO-8601)" });
  const toInput = el("input", { type: "text", placeholder: "to (ISO-8601)" });
  const friendsInput = el("input", { type: "text", placeholder: "friends a,b (optional)" });
  const totalLine = el("div", { class: "total" }, "");
  const resultsBox = el("div", { class: "results" });
  searchBox.append(queryInput, goButton, modeButton, fromInput, toInput,
                   friendsInput, totalLine, resultsBox);
  root.append(searchBox);

  const search = new SearchController(client, {
    renderResults(items: readonly RankedResult[], total: number) {
      totalLine.textContent = `${total} results`;
      resultsBox.textContent = "";
      for (const item of items) {
        const card = el("article", { class: "result" });
        const badge = el("span", { class: "trust-badge corner" }, `${item.trust}%`);
        card.append(
          badge,
          el("div", { class: "author" }, `@${item.author}`),
          el("div", { class: "text" }, item.text),
          el("div", { class: "meta" }, `#${item.rank} · ${item.created_at}`),
        );
        resultsBox.append(card);
      }
    },
    renderError(message: string) {
      totalLine.textContent = message;
    },
  });

  const runSearch = () => {
    search.setTimeRange(fromInput.value, toInput.value);
    search.setFriends(friendsInput.value);
    void search.run(queryInput.value);
  };
  goButton.addEventListener("click", runSearch);
  queryInput.addEventListener("keydown", (event) => {
    if (event.key === "Enter") runSearch();
  });
  modeButton.addEventListener("click", () => {
    void search.toggleMode().then(() => {
      modeButton.textContent = `mode: ${search.currentMode}`;
    });
  });
  resultsBox.addEventListener("scroll", () => {
    const nearBottom =
      resultsBox.scrollTop + resultsBox.clientHeight >= resultsBox.scrollHeight - 200;
    if (nearBottom) void search.more();
  });

  // -- admin coefficients -------------------------------------------------------
  const coeffBox = el("section", { class: "panel coefficients hidden" });
  coeffBox.append(el("h2", {}, "dynamic trust coefficients"));
  const coeffForm = el("div", { class: "coeff-form" });
  const coeffNote = el("div", { class: "note" }, "");
  const coeffSave = el("button", {}, "save");
  coeffBox.append(coeffForm, coeffSave, coeffNote);
  root.append(coeffBox);

  const coeffInputs = new Map<string, HTMLInputElement>();
  const coefficients = new CoefficientsPanel(client, {
    show(values) {
      coeffBox.classList.remove("hidden");
      coeffForm.textContent = "";
      coeffInputs.clear();
      for (const [name, value] of Object.entries(values).sort()) {
        const row = el("label", { class: "coeff-row" }, name);
        const input = el("input", { type: "text", value });
        row.append(input);
        coeffForm.append(row);
        coeffInputs.set(name, input);
      }
      coeffNote.textContent = "";
    },
    hide() {
      coeffBox.classList.add("hidden");
    },
    error(message) {
      coeffNote.textContent = message;
    },
  });
  coeffSave.addEventListener("click", () => {
    const values: Record<string, string> = {};
    for (const [name, input] of coeffInputs) values[name] = input.value;
    void coefficients.save(values);
  });
  void coefficients.load();

  // -- quarantine ------------------------------------------------------------------
  const quarantineBox = el("section", { class: "panel quarantine" });
  quarantineBox.append(el("h2", {}, "quarantine"));
  const recordsBox = el("div", { class: "records" });
  const quarantineNote = el("div", { class: "note" }, "");
  const candidateInput = el("input", { type: "text", placeholder: "candidate id" });
  const emailInput = el("input", { type: "text", placeholder: "declared email" });
  const submitButton = el("button", {}, "submit candidacy");
  quarantineBox.append(recordsBox, candidateInput, emailInput, submitButton, quarantineNote);
  root.append(quarantineBox);

  const quarantine = new QuarantinePanel(client, {
    renderRecords(records: QuarantineRecord[]) {
      recordsBox.textContent = "";
      for (const record of records) {
        const row = el("div", { class: `record ${record.state}` });
        row.append(
          el("span", { class: "candidate" }, record.candidate),
          el("span", { class: "state" }, record.state),
          el("span", {}, `approvals ${record.approvals.length} · flags ${record.flags.length}`),
        );
        const approve = el("button", {}, "approve");
        approve.addEventListener("click", () => void quarantine.approve(record.candidate));
        const flag = el("button", {}, "flag");
        flag.addEventListener("click", () => void quarantine.flag(record.candidate));
        row.append(approve, flag);
        recordsBox.append(row);
      }
    },
    notice(message: string) {
      quarantineNote.textContent = message;
    },
  });
  submitButton.addEventListener("click", () => {
    void quarantine.submit(candidateInput.value, { email: emailInput.value || undefined });
  });
  void quarantine.refresh();
}

/** Mount the login screen, then the app on success. */
export function mount(root: HTMLElement, endpoint: string): void {
  const client = new TrustnetClient(endpoint);
  root.textContent = "";
  const form = el("section", { class: "panel login" });
  form.append(el("h2", {}, "sign in"));
  const handleInput = el("input", { type: "text", placeholder: "handle" });
  const credentialInput = el("input", { type: "password", placeholder: "credential" });
  const button = el("button", {}, "log in");
  const note = el("div", { class: "note" }, "");
  form.append(handleInput, credentialInput, button, note);
  root.append(form);
  button.addEventListener("click", () => {
    client
      .login(handleInput.value, credentialInput.value)
      .then((session) => {
        client.setToken(session.token);
        buildApp(client, session, root);
      })
      .catch((err) => {
        note.textContent = err instanceof Error ? err.message : String(err);
      });
  });
}
