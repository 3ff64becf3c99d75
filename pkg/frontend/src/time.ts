/** Week-window arithmetic in Europe/London wall-clock terms.
 *
 * Review windows align to local Monday 00:00 so a reviewer always sees
 * whole civil weeks; because GB clock changes happen at 01:00, local
 * midnight always exists and the alignment is unambiguous.
 */

const LONDON = "Europe/London";

const partsFormat = new Intl.DateTimeFormat("en-GB", {
  timeZone: LONDON,
  year: "numeric",
  month: "2-digit",
  day: "2-digit",
  hour: "2-digit",
  minute: "2-digit",
  second: "2-digit",
  hour12: false,
});

export interface CivilDate {
  year: number;
  month: number; // 1..12
  day: number;
}

export function parseUtc(text: string): number {
  const normalized = text.endsWith("Z") ? text : text.replace(" ", "T");
  const ms = Date.parse(normalized);
  if (Number.isNaN(ms)) throw new Error(`not a timestamp: ${text}`);
  return ms;
}

export function isoUtc(ms: number): string {
  return new Date(ms).toISOString().slice(0, 19) + "+00:00";
}

function wallClock(ms: number): { date: CivilDate; hour: number; minute: number } {
  const parts: Record<string, string> = {};
  for (const piece of partsFormat.formatToParts(new Date(ms))) {
    parts[piece.type] = piece.value;
  }
  return {
    date: {
      year: Number(parts.year),
      month: Number(parts.month),
      day: Number(parts.day),
    },
    hour: Number(parts.hour) % 24, // Intl may render midnight as "24"
    minute: Number(parts.minute),
  };
}

export function londonCivilDate(utcMs: number): CivilDate {
  return wallClock(utcMs).date;
}

function civilToUtcGuess(date: CivilDate): number {
  return Date.UTC(date.year, date.month - 1, date.day);
}

/** The instant of local midnight on a London civil date. */
export function londonMidnight(date: CivilDate): number {
  // guess midnight as if the offset were zero, then correct by whatever
  // wall-clock time that instant actually shows; one pass suffices because
  // GB offsets never change at midnight
  const guess = civilToUtcGuess(date);
  const wall = wallClock(guess);
  const wallMs =
    Date.UTC(wall.date.year, wall.date.month - 1, wall.date.day) +
    (wall.hour * 60 + wall.minute) * 60_000;
  return guess - (wallMs - guess);
}

export function addCivilDays(date: CivilDate, days: number): CivilDate {
  const shifted = new Date(Date.UTC(date.year, date.month - 1, date.day + days));
  return {
    year: shifted.getUTCFullYear(),
    month: shifted.getUTCMonth() + 1,
    day: shifted.getUTCDate(),
  };
}

function weekdayIndex(date: CivilDate): number {
  // 0 = Monday .. 6 = Sunday
  return (new Date(Date.UTC(date.year, date.month - 1, date.day)).getUTCDay() + 6) % 7;
}

/** Start of the London week (Monday 00:00 local) containing the instant. */
export function mondayWindowStart(utcText: string): string {
  const civil = londonCivilDate(parseUtc(utcText));
  const monday = addCivilDays(civil, -weekdayIndex(civil));
  return isoUtc(londonMidnight(monday));
}

/** Shift a Monday-aligned window start by whole weeks. */
export function shiftWeeks(windowStartUtc: string, weeks: number): string {
  const civil = londonCivilDate(parseUtc(windowStartUtc));
  return isoUtc(londonMidnight(addCivilDays(civil, 7 * weeks)));
}

/** Exclusive end of a window that starts at a London midnight. */
export function windowEnd(windowStartUtc: string, days: number): string {
  const civil = londonCivilDate(parseUtc(windowStartUtc));
  return isoUtc(londonMidnight(addCivilDays(civil, days)));
}
