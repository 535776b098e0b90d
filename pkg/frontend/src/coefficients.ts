import { ApiError, TrustnetClient } from "./api.js";
import type { Coefficients } from "./types.js";

export interface CoefficientsView {
  show(values: Coefficients): void;
  hide(): void;
  error(message: string): void;
}

const FOUR_DECIMALS = /^\d+(\.\d{1,4})?$/;

/** Validate one coefficient input client-side (server re-validates). */
export function validCoefficient(raw: string): boolean {
  return FOUR_DECIMALS.test(raw.trim());
}

/**
 * Admin coefficient panel. Loading with a non-admin session hides the
 * panel instead of surfacing an error; saves are validated client-side
 * first (nonnegative, at most four decimals) and PUT as-is otherwise.
 */
export class CoefficientsPanel {
  visible = false;

  constructor(
    private client: TrustnetClient,
    private view: CoefficientsView,
  ) {}

  async load(): Promise<void> {
    try {
      const values = await this.client.getCoefficients();
      this.visible = true;
      this.view.show(values);
    } catch (err) {
      if (err instanceof ApiError && err.kind === "authorization") {
        this.visible = false;
        this.view.hide();
        return;
      }
      throw err;
    }
  }

  async save(values: Coefficients): Promise<boolean> {
    for (const [name, raw] of Object.entries(values)) {
      if (!validCoefficient(raw)) {
        this.view.error(`${name}: must be a nonnegative number with at most four decimals`);
        return false;
      }
    }
    try {
      const stored = await this.client.setCoefficients(values);
      this.view.show(stored);
      return true;
    } catch (err) {
      this.view.error(err instanceof Error ? err.message : String(err));
      return false;
    }
  }
}
