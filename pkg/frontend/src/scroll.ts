import type { SearchPage, RankedResult } from "./types.js";

export const PAGE_SIZE = 50;

/**
 * Accumulates pages of one result list. `loadNext` fetches the next page
 * only while more results exist, so a 123-match query costs exactly three
 * requests; further calls are free no-ops.
 */
export class InfiniteResults {
  private items: RankedResult[] = [];
  private total = 0;
  private nextPage = 1;
  private exhausted = false;
  private inFlight = false;

  constructor(
    private fetchPage: (page: number) => Promise<SearchPage>,
    private pageSize: number = PAGE_SIZE,
  ) {}

  get loaded(): readonly RankedResult[] {
    return this.items;
  }

  get totalMatches(): number {
    return this.total;
  }

  hasMore(): boolean {
    if (this.exhausted) return false;
    if (this.nextPage === 1) return true; // nothing fetched yet
    return this.items.length < this.total;
  }

  /** Fetch the next page; resolves false when there was nothing to do. */
  async loadNext(): Promise<boolean> {
    if (!this.hasMore() || this.inFlight) return false;
    this.inFlight = true;
    try {
      const page = await this.fetchPage(this.nextPage);
      this.total = page.total;
      this.items.push(...page.results);
      this.nextPage += 1;
      if (page.results.length < this.pageSize || this.items.length >= page.total) {
        this.exhausted = true;
      }
      return true;
    } finally {
      this.inFlight = false;
    }
  }
}
