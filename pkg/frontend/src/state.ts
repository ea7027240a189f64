// Console state and its reducer. Everything shown in the UI lives here
// and changes only through `reduce`, driven by two inputs: operator
// actions and server events. Metric numbers (accuracy, macro F1,
// counts) are copied verbatim from the latest `metrics` event, never
// recomputed client-side; the per-class table is a plain tally of
// prediction events.

import type { LabelRef, MetricsEvent, ServerEvent } from "./protocol.js";
import { isHelloAck, isLabelAck } from "./protocol.js";

export type Connection = "idle" | "connecting" | "open" | "reconnecting" | "closed";

export interface PredictionRow {
  window: number;
  trueName: string | null;
  predictedName: string | null;
  correct: boolean | null;
  topScore: number | null;
  predictMs: number;
  trainMs: number | null;
  atMs: number;
}

export interface ClassTally {
  windows: number;
  correct: number;
}

export interface AccuracyPoint {
  window: number;
  accuracy: number;
}

export interface ConsoleState {
  connection: Connection;
  sessionId: string | null;
  algo: string;
  seed: number | null;
  windowSize: number;
  rateHz: number;
  labels: string[];
  requestedLabel: string | null | undefined;
  ackedLabel: LabelRef | null;
  feed: PredictionRow[];
  series: AccuracyPoint[];
  metrics: MetricsEvent | null;
  finished: boolean;
  perClass: Record<string, ClassTally>;
  droppedTotal: number;
  lastError: { code: string; message: string } | null;
  queuedSends: number;
  streaming: boolean;
}

export const FEED_LIMIT = 200;

export const DEFAULT_ACTIVITIES = ["walk", "jog", "stairs_up", "stairs_down", "stand"];

export function initialState(algo = "inb"): ConsoleState {
  return {
    connection: "idle",
    sessionId: null,
    algo,
    seed: null,
    windowSize: 40,
    rateHz: 20,
    labels: [...DEFAULT_ACTIVITIES],
    requestedLabel: undefined,
    ackedLabel: null,
    feed: [],
    series: [],
    metrics: null,
    finished: false,
    perClass: {},
    droppedTotal: 0,
    lastError: null,
    queuedSends: 0,
    streaming: false,
  };
}

export type Action =
  | { kind: "socket"; status: Connection }
  | { kind: "queued"; count: number }
  | { kind: "event"; event: ServerEvent; atMs: number }
  | { kind: "define-label"; name: string }
  | { kind: "request-label"; name: string | null }
  | { kind: "streaming"; on: boolean }
  | { kind: "reset"; algo?: string };

export function reduce(state: ConsoleState, action: Action): ConsoleState {
  switch (action.kind) {
    case "socket":
      return { ...state, connection: action.status };
    case "queued":
      return { ...state, queuedSends: action.count };
    case "define-label":
      return withLabel(state, action.name);
    case "request-label":
      return { ...withLabel(state, action.name), requestedLabel: action.name };
    case "streaming":
      return { ...state, streaming: action.on };
    case "reset": {
      // New session: keep the operator's activity set, drop everything
      // the old server session produced.
      const fresh = initialState(action.algo ?? state.algo);
      return { ...fresh, labels: state.labels, connection: state.connection };
    }
    case "event":
      return applyEvent(state, action.event, action.atMs);
  }
}

function withLabel(state: ConsoleState, name: string | null): ConsoleState {
  if (name === null || state.labels.includes(name)) return state;
  return { ...state, labels: [...state.labels, name] };
}

function applyEvent(state: ConsoleState, evt: ServerEvent, atMs: number): ConsoleState {
  if (isHelloAck(evt)) {
    return {
      ...state,
      sessionId: evt.session,
      algo: evt.algo,
      seed: evt.seed,
      windowSize: evt.window_size,
      rateHz: evt.rate_hz,
      finished: false,
    };
  }
  if (isLabelAck(evt)) {
    const next = { ...state, ackedLabel: evt.label };
    return evt.label === null ? next : withLabel(next, evt.label.name);
  }
  switch (evt.type) {
    case "prediction": {
      const scores = Object.values(evt.scores);
      const row: PredictionRow = {
        window: evt.window,
        trueName: evt.true?.name ?? null,
        predictedName: evt.predicted?.name ?? null,
        correct: evt.correct,
        topScore: scores.length ? Math.max(...scores) : null,
        predictMs: evt.predict_ms,
        trainMs: evt.train_ms,
        atMs,
      };
      const feed = [...state.feed, row].slice(-FEED_LIMIT);
      let perClass = state.perClass;
      if (evt.true !== null) {
        const tally = perClass[evt.true.name] ?? { windows: 0, correct: 0 };
        perClass = {
          ...perClass,
          [evt.true.name]: {
            windows: tally.windows + 1,
            correct: tally.correct + (evt.correct ? 1 : 0),
          },
        };
      }
      return { ...state, feed, perClass };
    }
    case "metrics": {
      const series =
        evt.accuracy === null
          ? state.series
          : [...state.series, { window: evt.windows, accuracy: evt.accuracy }];
      return { ...state, metrics: evt, series, finished: evt.final === true };
    }
    case "error":
      return { ...state, lastError: { code: evt.code, message: evt.message } };
    case "warning":
      return { ...state, droppedTotal: state.droppedTotal + evt.dropped };
    default:
      return state;
  }
}

export type Listener = (state: ConsoleState) => void;

/** Minimal observable store around the reducer. */
export class Store {
  state: ConsoleState;
  private listeners: Listener[] = [];

  constructor(state: ConsoleState = initialState()) {
    this.state = state;
  }

  dispatch(action: Action): void {
    this.state = reduce(this.state, action);
    for (const fn of this.listeners) fn(this.state);
  }

  subscribe(fn: Listener): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((f) => f !== fn);
    };
  }
}
