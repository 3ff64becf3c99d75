export type Source = "ELEXM" | "NGEM";

export interface Meta {
  start_utc: string;
  end_utc: string;
  sources: Source[];
  columns: Record<Source, string[]>;
}

/** One half-open UTC window of the raw table, as served by the core. */
export interface WindowPayload {
  start_utc: string;
  end_utc: string;
  keys: string[];
  series: Record<string, (number | null)[]>;
  flags: number[];
}

export interface FlagRecord {
  datesp: string;
  flag: number;
  note: string;
  updated_utc: string;
}

export interface FlagUpdate {
  datesp: string;
  flag: number;
  note?: string;
}
