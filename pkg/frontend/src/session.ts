import type { ReviewApi } from "./api.js";
import type { FlagUpdate, Meta, Source, WindowPayload } from "./types.js";
import { mondayWindowStart, shiftWeeks, windowEnd } from "./time.js";

/** Client-side review state: the loaded week, pending flag edits and
 * column visibility. Edits stay local until save() posts them; a pending
 * edit on a key is dropped the moment that key leaves the loaded window. */
export class ReviewSession {
  source: Source = "ELEXM";
  windowStartUtc = "";
  windowDays = 7;
  meta: Meta | null = null;
  payload: WindowPayload | null = null;
  visibleColumns = new Set<string>();
  private edits = new Map<string, FlagUpdate>();

  constructor(private client: ReviewApi) {}

  async init(): Promise<void> {
    this.meta = await this.client.getMeta();
    this.windowStartUtc = mondayWindowStart(this.meta.start_utc);
    this.resetVisibleColumns();
    await this.loadWindow();
  }

  resetVisibleColumns(): void {
    if (this.meta) this.visibleColumns = new Set(this.meta.columns[this.source]);
  }

  get windowEndUtc(): string {
    return windowEnd(this.windowStartUtc, this.windowDays);
  }

  async loadWindow(): Promise<WindowPayload> {
    this.payload = await this.client.getWindow(
      this.windowStartUtc,
      this.windowEndUtc,
      this.source,
    );
    const inWindow = new Set(this.payload.keys);
    for (const key of [...this.edits.keys()]) {
      if (!inWindow.has(key)) this.edits.delete(key);
    }
    return this.payload;
  }

  serverFlag(key: string): number {
    if (!this.payload) return 1;
    const index = this.payload.keys.indexOf(key);
    return index < 0 ? 1 : this.payload.flags[index];
  }

  /** The flag the reviewer currently sees: pending edit over server state. */
  currentFlag(key: string): number {
    const edit = this.edits.get(key);
    return edit ? edit.flag : this.serverFlag(key);
  }

  flaggedKeys(): string[] {
    if (!this.payload) return [];
    return this.payload.keys.filter((k) => this.currentFlag(k) === 0);
  }

  dirtyKeys(): Set<string> {
    return new Set(this.edits.keys());
  }

  get dirtyCount(): number {
    return this.edits.size;
  }

  /** Flip 0<->1 locally; toggling twice restores the server state exactly. */
  toggleFlag(key: string, note = ""): void {
    if (!this.payload || !this.payload.keys.includes(key)) {
      throw new Error(`key not in loaded window: ${key}`);
    }
    if (this.edits.has(key)) {
      this.edits.delete(key);
      return;
    }
    const flipped = this.serverFlag(key) === 0 ? 1 : 0;
    this.edits.set(key, { datesp: key, flag: flipped, note });
  }

  /** Post all pending edits; on success the window is re-fetched so the
   * view reflects server truth. On failure the edits are kept. */
  async save(): Promise<number> {
    if (this.edits.size === 0) return 0;
    const updates = [...this.edits.values()].sort((a, b) =>
      a.datesp < b.datesp ? -1 : 1,
    );
    const applied = await this.client.postFlags(this.source, updates);
    this.edits.clear();
    await this.loadWindow();
    return applied;
  }

  async nextWeek(): Promise<void> {
    this.windowStartUtc = shiftWeeks(this.windowStartUtc, 1);
    await this.loadWindow();
  }

  async previousWeek(): Promise<void> {
    this.windowStartUtc = shiftWeeks(this.windowStartUtc, -1);
    await this.loadWindow();
  }

  /** Switching source discards nothing silently: refuse with edits pending. */
  async setSource(source: Source): Promise<boolean> {
    if (source === this.source) return true;
    if (this.edits.size > 0) return false;
    this.source = source;
    this.resetVisibleColumns();
    await this.loadWindow();
    return true;
  }

  toggleColumn(column: string): void {
    if (this.visibleColumns.has(column)) this.visibleColumns.delete(column);
    else this.visibleColumns.add(column);
  }
}
