import type { TrustnetClient } from "./api.js";
import type { QuarantineRecord } from "./types.js";

export interface QuarantineView {
  renderRecords(records: QuarantineRecord[]): void;
  notice(message: string): void;
}

/** Quarantine panel: list candidacies, submit, and take stances. */
export class QuarantinePanel {
  constructor(
    private client: TrustnetClient,
    private view: QuarantineView,
  ) {}

  async refresh(): Promise<void> {
    const listing = await this.client.quarantineList();
    this.view.renderRecords(listing.records);
  }

  async submit(candidate: string, attrs: { handle?: string; email?: string; external_id?: string }): Promise<void> {
    try {
      const record = await this.client.quarantineSubmit({ candidate, ...attrs });
      this.view.notice(`${record.candidate} is now ${record.state}`);
    } catch (err) {
      this.view.notice(err instanceof Error ? err.message : String(err));
    }
    await this.refresh();
  }

  async approve(candidate: string): Promise<void> {
    await this.stance(() => this.client.quarantineApprove(candidate));
  }

  async flag(candidate: string): Promise<void> {
    await this.stance(() => this.client.quarantineFlag(candidate));
  }

  private async stance(call: () => Promise<QuarantineRecord>): Promise<void> {
    try {
      const record = await call();
      const extra = record.notice ? ` (${record.notice})` : "";
      this.view.notice(`${record.candidate}: ${record.state}${extra}`);
    } catch (err) {
      this.view.notice(err instanceof Error ? err.message : String(err));
    }
    await this.refresh();
  }
}
