/** Wire types of the trustnet HTTP/JSON contract. Trust values are
 *  two-decimal strings produced by the server; the client never derives
 *  or recomputes them. */

export interface Session {
  token: string;
  user: string;
  role: "admin" | "normal";
}

export interface TrustValue {
  contact: string;
  value: string;
}

export interface TopicTrustValue extends TrustValue {
  topic: string;
}

export interface RankedResult {
  post_id: string;
  author: string;
  text: string;
  created_at: string;
  trust: string;
  rank: number;
}

export interface SearchPage {
  total: number;
  page: number;
  results: RankedResult[];
}

export type TrustMode = "static" | "dynamic";

export interface SearchParams {
  q: string;
  mode: TrustMode;
  from?: string;
  to?: string;
  friends?: string;
  page?: number;
}

export type Coefficients = Record<string, string>;

export interface ExpertsResponse {
  topic: string;
  threshold: string;
  experts: string[];
}

export interface QuarantineRecord {
  candidate: string;
  fingerprint: string;
  state: "quarantined" | "trusted" | "banned";
  approvals: string[];
  flags: string[];
  created_at: string;
  notice?: string | null;
}

export interface QuarantineList {
  records: QuarantineRecord[];
}

export interface Forecast {
  stream: string;
  prediction: "positive" | "negative" | "no_opinion";
  tau: Record<string, string>;
  observations: number;
}

export interface ApiErrorBody {
  error: {
    type: string;
    message: string;
  };
}
