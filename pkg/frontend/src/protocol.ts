// Wire protocol spoken by the streaming prediction service. One JSON
// object per message, every message carries `v: 1`. The client opens a
// session with `hello`, sets the active activity with `label`, pushes
// `sample` messages, and finishes with `end`; the server answers with
// `ack`, `prediction`, `metrics`, `error` and `warning` events.

export const PROTOCOL_VERSION = 1;

export interface LabelRef {
  id: number;
  name: string;
}

// --- client -> server ---

export interface HelloMsg {
  v: typeof PROTOCOL_VERSION;
  type: "hello";
  algo: string;
  seed?: number;
  window_size?: number;
  rate_hz?: number;
  session?: string;
}

export interface LabelMsg {
  v: typeof PROTOCOL_VERSION;
  type: "label";
  name: string | null;
}

export interface SampleMsg {
  v: typeof PROTOCOL_VERSION;
  type: "sample";
  t_ms: number;
  ax: number;
  ay: number;
  az: number;
  gx: number;
  gy: number;
  gz: number;
}

export interface EndMsg {
  v: typeof PROTOCOL_VERSION;
  type: "end";
}

export type ClientMsg = HelloMsg | LabelMsg | SampleMsg | EndMsg;

export interface HelloOptions {
  algo: string;
  seed?: number | null;
  windowSize?: number;
  rateHz?: number;
  session?: string | null;
}

export function helloMsg(opts: HelloOptions): HelloMsg {
  const msg: HelloMsg = { v: PROTOCOL_VERSION, type: "hello", algo: opts.algo };
  if (opts.seed !== undefined && opts.seed !== null) msg.seed = opts.seed;
  if (opts.windowSize !== undefined) msg.window_size = opts.windowSize;
  if (opts.rateHz !== undefined) msg.rate_hz = opts.rateHz;
  if (opts.session !== undefined && opts.session !== null) msg.session = opts.session;
  return msg;
}

export function labelMsg(name: string | null): LabelMsg {
  return { v: PROTOCOL_VERSION, type: "label", name };
}

export function sampleMsg(tMs: number, values: readonly number[]): SampleMsg {
  if (values.length !== 6) {
    throw new Error(`sample needs 6 channel values, got ${values.length}`);
  }
  const [ax, ay, az, gx, gy, gz] = values;
  return { v: PROTOCOL_VERSION, type: "sample", t_ms: tMs, ax, ay, az, gx, gy, gz };
}

export function endMsg(): EndMsg {
  return { v: PROTOCOL_VERSION, type: "end" };
}

export function encode(msg: ClientMsg): string {
  return JSON.stringify(msg);
}

// --- server -> client ---

export interface HelloAck {
  v: number;
  type: "ack";
  session: string;
  of: "hello";
  algo: string;
  seed: number | null;
  window_size: number;
  rate_hz: number;
}

export interface LabelAck {
  v: number;
  type: "ack";
  session: string;
  of: "label";
  label: LabelRef | null;
}

export interface PredictionEvent {
  v: number;
  type: "prediction";
  session: string;
  window: number;
  predicted: LabelRef | null;
  true: LabelRef | null;
  correct: boolean | null;
  scores: Record<string, number>;
  predict_ms: number;
  train_ms: number | null;
}

export interface MetricsEvent {
  v: number;
  type: "metrics";
  session: string;
  windows: number;
  evaluated: number;
  correct: number;
  none: number;
  accuracy: number | null;
  macro_f1: number | null;
  final?: boolean;
}

export interface ErrorEvent {
  v: number;
  type: "error";
  session: string | null;
  code: string;
  message: string;
}

export interface WarningEvent {
  v: number;
  type: "warning";
  session: string;
  reason: string;
  dropped: number;
}

export type ServerEvent =
  | HelloAck
  | LabelAck
  | PredictionEvent
  | MetricsEvent
  | ErrorEvent
  | WarningEvent;

const EVENT_TYPES = new Set(["ack", "prediction", "metrics", "error", "warning"]);

/** Parse one frame off the wire; null for anything that is not a known event. */
export function parseServerEvent(data: unknown): ServerEvent | null {
  if (typeof data !== "string") return null;
  let obj: unknown;
  try {
    obj = JSON.parse(data);
  } catch {
    return null;
  }
  if (typeof obj !== "object" || obj === null || Array.isArray(obj)) return null;
  const evt = obj as Record<string, unknown>;
  if (typeof evt.type !== "string" || !EVENT_TYPES.has(evt.type)) return null;
  if (evt.v !== PROTOCOL_VERSION) return null;
  return evt as unknown as ServerEvent;
}

export function isHelloAck(evt: ServerEvent): evt is HelloAck {
  return evt.type === "ack" && (evt as HelloAck).of === "hello";
}

export function isLabelAck(evt: ServerEvent): evt is LabelAck {
  return evt.type === "ack" && (evt as LabelAck).of === "label";
}
