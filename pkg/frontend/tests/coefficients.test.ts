import { afterEach, describe, expect, it, vi } from "vitest";

import { TrustnetClient } from "../src/api";
import { CoefficientsPanel, validCoefficient } from "../src/coefficients";
import type { Coefficients } from "../src/types";
import { errorResponse, jsonResponse, stubFetch } from "./helpers";

afterEach(() => vi.unstubAllGlobals());

const VALUES: Coefficients = {
  c_favorites: "0.2500",
  c_retweets: "0.2500",
  c_mentions: "0.2500",
  c_fridayfollows: "0.2500",
  c_results: "0.0500",
};

class CapturingView {
  shown: Coefficients | null = null;
  hidden = false;
  errors: string[] = [];
  show(values: Coefficients) {
    this.shown = values;
    this.hidden = false;
  }
  hide() {
    this.hidden = true;
  }
  error(message: string) {
    this.errors.push(message);
  }
}

describe("CoefficientsPanel", () => {
  it("shows values for an admin session", async () => {
    stubFetch(() => jsonResponse(VALUES));
    const view = new CapturingView();
    const panel = new CoefficientsPanel(new TrustnetClient("http://x", "t"), view);
    await panel.load();
    expect(panel.visible).toBe(true);
    expect(view.shown).toEqual(VALUES);
  });

  it("hides the panel entirely for a non-admin session", async () => {
    stubFetch(() => errorResponse("authorization", "admins only", 403));
    const view = new CapturingView();
    const panel = new CoefficientsPanel(new TrustnetClient("http://x", "t"), view);
    await panel.load();
    expect(panel.visible).toBe(false);
    expect(view.hidden).toBe(true);
    expect(view.errors).toEqual([]);
  });

  it("rejects invalid input client-side without a request", async () => {
    const calls = stubFetch(() => jsonResponse(VALUES));
    const view = new CapturingView();
    const panel = new CoefficientsPanel(new TrustnetClient("http://x", "t"), view);
    const saved = await panel.save({ c_favorites: "-1" });
    expect(saved).toBe(false);
    expect(calls.length).toBe(0);
    expect(view.errors[0]).toContain("c_favorites");
  });

  it("saves and re-displays the server echo", async () => {
    stubFetch((call) => {
      expect(call.method).toBe("PUT");
      return jsonResponse({ ...VALUES, c_favorites: "0.5000" });
    });
    const view = new CapturingView();
    const panel = new CoefficientsPanel(new TrustnetClient("http://x", "t"), view);
    const saved = await panel.save({ c_favorites: "0.5" });
    expect(saved).toBe(true);
    expect(view.shown?.c_favorites).toBe("0.5000");
  });
});

describe("validCoefficient", () => {
  it.each(["0", "0.25", "1.0000", "12.5"])("accepts %s", (raw) => {
    expect(validCoefficient(raw)).toBe(true);
  });

  it.each(["-1", "0.00001", "abc", "", "1e-3"])("rejects %s", (raw) => {
    expect(validCoefficient(raw)).toBe(false);
  });
});
