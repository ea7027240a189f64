// Rendering helpers that turn console state into the strings the UI
// shows. Pure functions so the display contract is testable without a
// DOM. Metric readouts format the server's values; they never derive
// numbers from the feed.

import type { ConsoleState, PredictionRow } from "./state.js";

export function pct(value: number): string {
  return `${(value * 100).toFixed(2)}%`;
}

export function accuracyText(state: ConsoleState): string {
  const m = state.metrics;
  if (m === null || m.accuracy === null) return "--";
  return pct(m.accuracy);
}

export function macroF1Text(state: ConsoleState): string {
  const m = state.metrics;
  if (m === null || m.macro_f1 === null) return "--";
  return pct(m.macro_f1);
}

export function countsText(state: ConsoleState): string {
  const m = state.metrics;
  if (m === null) return "no windows yet";
  const tail = state.finished ? " (final)" : "";
  return `${m.windows} windows, ${m.evaluated} evaluated, ${m.correct} correct, ${m.none} no-prediction${tail}`;
}

export function connectionText(state: ConsoleState): string {
  const queued = state.queuedSends > 0 ? ` (${state.queuedSends} queued)` : "";
  return `${state.connection}${queued}`;
}

export function sessionText(state: ConsoleState): string {
  if (state.sessionId === null) return "no session";
  const seed = state.seed === null ? "server default" : state.seed;
  return `session ${state.sessionId}: ${state.algo}, window ${state.windowSize}, ${state.rateHz} Hz, seed ${seed}`;
}

export function feedRowText(row: PredictionRow): string {
  const trueName = row.trueName ?? "(unlabeled)";
  const predicted = row.predictedName ?? "none";
  const mark = row.correct === null ? " " : row.correct ? "+" : "x";
  const score = row.topScore === null ? "" : ` (${row.topScore.toFixed(2)})`;
  return `w=${row.window} [${mark}] true=${trueName} pred=${predicted}${score}`;
}

export function latencyText(state: ConsoleState): string {
  if (state.feed.length === 0) return "--";
  const last = state.feed[state.feed.length - 1];
  const sorted = state.feed.map((r) => r.predictMs).sort((a, b) => a - b);
  const median = sorted[Math.floor(sorted.length / 2)];
  const train = last.trainMs === null ? "" : `, train ${last.trainMs.toFixed(2)} ms`;
  return `predict ${last.predictMs.toFixed(2)} ms (median ${median.toFixed(2)} ms)${train}`;
}

export interface ClassRow {
  name: string;
  windows: number;
  correct: number;
  share: string;
}

export function perClassRows(state: ConsoleState): ClassRow[] {
  return Object.entries(state.perClass)
    .map(([name, tally]) => ({
      name,
      windows: tally.windows,
      correct: tally.correct,
      share: tally.windows === 0 ? "--" : pct(tally.correct / tally.windows),
    }))
    .sort((a, b) => a.name.localeCompare(b.name));
}

/** Polyline points for a width x height accuracy sparkline, newest right. */
export function sparklinePoints(state: ConsoleState, width: number, height: number): [number, number][] {
  const series = state.series;
  if (series.length === 0) return [];
  if (series.length === 1) return [[width, height * (1 - series[0].accuracy)]];
  const step = width / (series.length - 1);
  return series.map((p, i) => [i * step, height * (1 - p.accuracy)]);
}
