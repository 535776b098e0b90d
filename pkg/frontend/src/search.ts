import type { TrustnetClient } from "./api.js";
import type { RankedResult, SearchParams, TrustMode } from "./types.js";
import { InfiniteResults } from "./scroll.js";

export interface SearchView {
  renderResults(items: readonly RankedResult[], total: number): void;
  renderError(message: string): void;
}

/**
 * Owns the current query, mode, filters, and result accumulation.
 * Re-running (or toggling the mode) supersedes any in-flight request:
 * stale responses are dropped, the newest wins.
 */
export class SearchController {
  private mode: TrustMode = "static";
  private query = "";
  private from?: string;
  private to?: string;
  private friends?: string;
  private sequence = 0;
  private current: InfiniteResults | null = null;

  constructor(
    private client: TrustnetClient,
    private view: SearchView,
  ) {}

  get currentMode(): TrustMode {
    return this.mode;
  }

  setTimeRange(from?: string, to?: string): void {
    this.from = from || undefined;
    this.to = to || undefined;
  }

  setFriends(friends?: string): void {
    this.friends = friends || undefined;
  }

  /** Issue a fresh search for `query`; empty queries are guarded client-side. */
  async run(query: string): Promise<void> {
    if (!query.trim()) {
      this.view.renderError("enter a search term");
      return;
    }
    this.query = query;
    const seq = ++this.sequence;
    const params: Omit<SearchParams, "page"> = {
      q: this.query,
      mode: this.mode,
      from: this.from,
      to: this.to,
      friends: this.friends,
    };
    const results = new InfiniteResults((page) =>
      this.client.search({ ...params, page }),
    );
    try {
      await results.loadNext();
    } catch (err) {
      if (seq === this.sequence) this.view.renderError(describe(err));
      return;
    }
    if (seq !== this.sequence) return; // superseded by a newer search
    this.current = results;
    this.view.renderResults(results.loaded, results.totalMatches);
  }

  /** Flip static/dynamic and re-issue the current query. */
  async toggleMode(): Promise<void> {
    this.mode = this.mode === "static" ? "dynamic" : "static";
    if (this.query) await this.run(this.query);
  }

  /** Scroll handler: fetch the next page of the current result list. */
  async more(): Promise<void> {
    const seq = this.sequence;
    const results = this.current;
    if (!results || !results.hasMore()) return;
    try {
      await results.loadNext();
    } catch (err) {
      if (seq === this.sequence) this.view.renderError(describe(err));
      return;
    }
    if (seq !== this.sequence) return;
    this.view.renderResults(results.loaded, results.totalMatches);
  }
}

function describe(err: unknown): string {
  return err instanceof Error ? err.message : String(err);
}
