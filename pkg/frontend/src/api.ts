import type {
  ApiErrorBody,
  Coefficients,
  ExpertsResponse,
  Forecast,
  QuarantineList,
  QuarantineRecord,
  SearchPage,
  SearchParams,
  Session,
  TopicTrustValue,
  TrustValue,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    message: string,
    public kind: string,
    public status: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** Thin typed client over the service contract; no endpoint beyond it. */
export class TrustnetClient {
  constructor(
    private baseUrl: string,
    private token: string | null = null,
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  setToken(token: string | null): void {
    this.token = token;
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const headers: Record<string, string> = {};
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    if (body !== undefined) headers["Content-Type"] = "application/json";
    const response = await fetch(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let kind = "error";
      let message = `HTTP ${response.status}`;
      try {
        const parsed = (await response.json()) as ApiErrorBody;
        kind = parsed.error.type;
        message = parsed.error.message;
      } catch {
        // non-JSON error body; keep the status line
      }
      throw new ApiError(message, kind, response.status);
    }
    return response.json() as Promise<T>;
  }

  login(handle: string, credential: string): Promise<Session> {
    return this.request<Session>("POST", "/login", { handle, credential });
  }

  register(handle: string, credential: string, email?: string) {
    return this.request<{ user: string; validation_token: string }>(
      "POST",
      "/register",
      { handle, credential, email },
    );
  }

  validate(token: string) {
    return this.request<{ user: string; active: boolean }>("POST", "/validate", {
      token,
    });
  }

  getTrust(contact: string): Promise<TrustValue> {
    return this.request<TrustValue>("GET", `/trust/${encodeURIComponent(contact)}`);
  }

  setTrust(contact: string, value: string): Promise<TrustValue> {
    return this.request<TrustValue>("PUT", `/trust/${encodeURIComponent(contact)}`, {
      value,
    });
  }

  setTopicTrust(contact: string, topic: string, value: string): Promise<TopicTrustValue> {
    return this.request<TopicTrustValue>(
      "PUT",
      `/topic-trust/${encodeURIComponent(contact)}/${encodeURIComponent(topic)}`,
      { value },
    );
  }

  /** Contacts enumerate via the experts projection at threshold 0. */
  contacts(): Promise<ExpertsResponse> {
    return this.request<ExpertsResponse>("GET", "/experts?topic=contacts&threshold=0");
  }

  experts(topic: string, threshold: string): Promise<ExpertsResponse> {
    const params = new URLSearchParams({ topic, threshold });
    return this.request<ExpertsResponse>("GET", `/experts?${params}`);
  }

  search(params: SearchParams): Promise<SearchPage> {
    const query = new URLSearchParams({ q: params.q, mode: params.mode });
    if (params.from) query.set("from", params.from);
    if (params.to) query.set("to", params.to);
    if (params.friends) query.set("friends", params.friends);
    query.set("page", String(params.page ?? 1));
    return this.request<SearchPage>("GET", `/search?${query}`);
  }

  getCoefficients(): Promise<Coefficients> {
    return this.request<Coefficients>("GET", "/admin/coefficients");
  }

  setCoefficients(values: Coefficients): Promise<Coefficients> {
    return this.request<Coefficients>("PUT", "/admin/coefficients", values);
  }

  quarantineList(): Promise<QuarantineList> {
    return this.request<QuarantineList>("GET", "/quarantine");
  }

  quarantineSubmit(body: {
    candidate: string;
    handle?: string;
    email?: string;
    external_id?: string;
  }): Promise<QuarantineRecord> {
    return this.request<QuarantineRecord>("POST", "/quarantine/submit", body);
  }

  quarantineApprove(candidate: string): Promise<QuarantineRecord> {
    return this.request<QuarantineRecord>(
      "POST",
      `/quarantine/${encodeURIComponent(candidate)}/approve`,
    );
  }

  quarantineFlag(candidate: string): Promise<QuarantineRecord> {
    return this.request<QuarantineRecord>(
      "POST",
      `/quarantine/${encodeURIComponent(candidate)}/flag`,
    );
  }

  forecast(stream: string): Promise<Forecast> {
    return this.request<Forecast>("GET", `/forecast/${encodeURIComponent(stream)}`);
  }
}
