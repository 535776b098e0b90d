import type { TrustnetClient } from "./api.js";

export interface SliderView {
  /** Show the server-confirmed value for a contact (two-decimal string). */
  display(contact: string, value: string): void;
  /** Surface a failure inline; the slider has already been reverted. */
  error(contact: string, message: string): void;
}

/**
 * Trust slider panel. Every displayed number is the last value the server
 * confirmed: a successful PUT displays the response body's value, a failed
 * PUT reverts to the previous confirmed value. Nothing is computed locally.
 */
export class TrustSliderPanel {
  private confirmed = new Map<string, string>();

  constructor(
    private client: TrustnetClient,
    private view: SliderView,
  ) {}

  confirmedValue(contact: string): string | undefined {
    return this.confirmed.get(contact);
  }

  async load(contact: string): Promise<void> {
    const result = await this.client.getTrust(contact);
    this.confirmed.set(contact, result.value);
    this.view.display(contact, result.value);
  }

  /** Commit a slider change: PUT, then display what the server stored. */
  async commit(contact: string, rawValue: string): Promise<void> {
    try {
      const result = await this.client.setTrust(contact, rawValue);
      this.confirmed.set(contact, result.value);
      this.view.display(contact, result.value);
    } catch (err) {
      const previous = this.confirmed.get(contact);
      if (previous !== undefined) this.view.display(contact, previous);
      this.view.error(contact, err instanceof Error ? err.message : String(err));
    }
  }
}
