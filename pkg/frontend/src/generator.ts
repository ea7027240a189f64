// Browser-side sample sources. The live generator stands in for a
// phone strapped to a moving person: it synthesizes six sinusoidal
// channels for whatever activity the operator currently has selected.
// The CSV source replays a recording made by the engine's `gen`
// command. A Streamer paces either source toward the session client,
// honoring the sample timestamps scaled by a speed multiplier.

export interface ChannelWave {
  offset: number;
  amp: number;
  freqHz: number;
}

export interface ActivityWaveform {
  name: string;
  channels: ChannelWave[];
  noiseSigma: number;
}

function wave(name: string, offsets: number[], amps: number[], freqs: number[], sigma: number): ActivityWaveform {
  const channels = offsets.map((offset, i) => ({ offset, amp: amps[i], freqHz: freqs[i] }));
  return { name, channels, noiseSigma: sigma };
}

export const BUILTIN_WAVEFORMS: ActivityWaveform[] = [
  wave("walk", [0.2, 9.6, 0.5, 0.1, 0.2, 0.1], [1.2, 1.6, 0.8, 0.5, 0.9, 0.4], [1.8, 1.8, 3.6, 1.8, 1.8, 3.6], 0.25),
  wave("jog", [0.5, 9.2, 1.0, 0.3, 0.5, 0.2], [3.5, 4.5, 2.2, 1.4, 2.6, 1.1], [2.8, 2.8, 5.6, 2.8, 2.8, 5.6], 0.45),
  wave("stairs_up", [0.8, 9.0, 1.5, 0.5, 0.8, 0.4], [1.8, 2.4, 1.4, 0.9, 1.5, 0.7], [1.4, 1.4, 2.8, 1.4, 1.4, 2.8], 0.3),
  wave("stairs_down", [-0.4, 9.9, -0.8, -0.3, -0.5, -0.2], [2.1, 2.8, 1.6, 1.0, 1.7, 0.8], [1.6, 1.6, 3.2, 1.6, 1.6, 3.2], 0.3),
  wave("stand", [0.0, 9.81, 0.0, 0.0, 0.0, 0.0], [0.05, 0.05, 0.05, 0.02, 0.02, 0.02], [0.3, 0.3, 0.3, 0.3, 0.3, 0.3], 0.02),
];

export function waveformByName(): Map<string, ActivityWaveform> {
  return new Map(BUILTIN_WAVEFORMS.map((w) => [w.name, w]));
}

/** Deterministic 32-bit PRNG (mulberry32), uniform in [0, 1). */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export interface TimedSample {
  tMs: number;
  values: number[];
  /** null: unlabeled, or labeling is left to the operator's panel. */
  label: string | null;
}

export interface SampleSource {
  next(): TimedSample | null;
}

/**
 * Endless source that renders the waveform of the currently selected
 * activity. Labels are not attached here: the operator's label panel
 * already told the server what the activity is.
 */
export class LiveWaveformSource implements SampleSource {
  private readonly waveforms: Map<string, ActivityWaveform>;
  private readonly rateHz: number;
  private readonly activeName: () => string | null;
  private readonly fallback: string;
  private readonly rand: () => number;
  private index = 0;

  constructor(
    activeName: () => string | null,
    opts: { rateHz?: number; seed?: number; waveforms?: ActivityWaveform[]; fallback?: string } = {},
  ) {
    this.activeName = activeName;
    this.rateHz = opts.rateHz ?? 20;
    this.fallback = opts.fallback ?? "stand";
    this.rand = mulberry32(opts.seed ?? 1);
    const catalog = opts.waveforms ?? BUILTIN_WAVEFORMS;
    this.waveforms = new Map(catalog.map((w) => [w.name, w]));
    if (!this.waveforms.has(this.fallback)) {
      throw new Error(`fallback waveform ${this.fallback} is not in the catalog`);
    }
  }

  private gaussian(): number {
    // Box-Muller; the tiny chance of u === 0 is clamped away.
    const u = Math.max(this.rand(), 1e-12);
    const v = this.rand();
    return Math.sqrt(-2 * Math.log(u)) * Math.cos(2 * Math.PI * v);
  }

  next(): TimedSample {
    const name = this.activeName();
    const waveform = (name !== null && this.waveforms.get(name)) || this.waveforms.get(this.fallback)!;
    const tMs = Math.round((this.index * 1000) / this.rateHz);
    const t = tMs / 1000;
    const values = waveform.channels.map(
      (c) => c.offset + c.amp * Math.sin(2 * Math.PI * c.freqHz * t) + waveform.noiseSigma * this.gaussian(),
    );
    this.index += 1;
    return { tMs, values, label: null };
  }
}

// --- CSV replay ---

export const CSV_HEADER = ["t_ms", "ax", "ay", "az", "gx", "gy", "gz", "label"];

/** Split one CSV line, honoring double-quoted fields with "" escapes. */
function splitCsvLine(line: string, rowIndex: number): string[] {
  const fields: string[] = [];
  let field = "";
  let quoted = false;
  for (let i = 0; i < line.length; i++) {
    const ch = line[i];
    if (quoted) {
      if (ch === '"') {
        if (line[i + 1] === '"') {
          field += '"';
          i++;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch === '"' && field === "") {
      quoted = true;
    } else if (ch === ",") {
      fields.push(field);
      field = "";
    } else {
      field += ch;
    }
  }
  if (quoted) throw new Error(`row ${rowIndex}: unterminated quote`);
  fields.push(field);
  return fields;
}

export function parseRecordingCsv(text: string): TimedSample[] {
  const lines = text.split(/\r\n|\n/).filter((line, i, all) => line !== "" || i < all.length - 1);
  if (lines.length === 0 || splitCsvLine(lines[0], 0).join(",") !== CSV_HEADER.join(",")) {
    throw new Error(`row 0: expected header ${CSV_HEADER.join(",")}`);
  }
  const samples: TimedSample[] = [];
  for (let i = 1; i < lines.length; i++) {
    if (lines[i] === "") continue;
    const fields = splitCsvLine(lines[i], i);
    if (fields.length !== CSV_HEADER.length) {
      throw new Error(`row ${i}: expected ${CSV_HEADER.length} fields, got ${fields.length}`);
    }
    const numbers = fields.slice(0, 7).map(Number);
    if (numbers.some((n) => !Number.isFinite(n))) {
      throw new Error(`row ${i}: non-numeric channel value`);
    }
    samples.push({
      tMs: numbers[0],
      values: numbers.slice(1),
      label: fields[7] === "" ? null : fields[7],
    });
  }
  return samples;
}

export class CsvSource implements SampleSource {
  private readonly samples: TimedSample[];
  private index = 0;

  constructor(text: string) {
    this.samples = parseRecordingCsv(text);
  }

  get length(): number {
    return this.samples.length;
  }

  next(): TimedSample | null {
    return this.index < this.samples.length ? this.samples[this.index++] : null;
  }
}

// --- pacing ---

export interface StreamTarget {
  sendSample(tMs: number, values: readonly number[]): void;
  setLabel(name: string | null): void;
}

export interface StreamerOptions {
  /** 0 streams as fast as possible; 1 follows timestamps; N runs N times faster. */
  speed?: number;
  /** Replay the source's own labels as label messages (CSV recordings). */
  applyLabels?: boolean;
  now?: () => number;
  onDone?: () => void;
}

const BURST_CHUNK = 200;

export class Streamer {
  private readonly target: StreamTarget;
  private readonly source: SampleSource;
  private readonly speed: number;
  private readonly applyLabels: boolean;
  private readonly now: () => number;
  private readonly onDone?: () => void;

  private timer: ReturnType<typeof setTimeout> | null = null;
  private pending: TimedSample | null = null;
  private originMs: number | null = null;
  private wallStart = 0;
  private lastLabel: string | null | undefined = undefined;
  running = false;

  constructor(target: StreamTarget, source: SampleSource, opts: StreamerOptions = {}) {
    this.target = target;
    this.source = source;
    this.speed = opts.speed ?? 1;
    this.applyLabels = opts.applyLabels ?? false;
    this.now = opts.now ?? Date.now;
    this.onDone = opts.onDone;
    if (this.speed < 0) throw new Error("speed must be >= 0");
  }

  start(): void {
    if (this.running) return;
    this.running = true;
    this.wallStart = this.now();
    this.tick();
  }

  /** Stop between samples; nothing buffered is flushed or fabricated. */
  stop(): void {
    this.running = false;
    this.pending = null;
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
  }

  private emit(sample: TimedSample): void {
    if (this.applyLabels && sample.label !== this.lastLabel) {
      this.lastLabel = sample.label;
      this.target.setLabel(sample.label);
    }
    this.target.sendSample(sample.tMs, sample.values);
  }

  private finish(): void {
    this.running = false;
    this.timer = null;
    this.onDone?.();
  }

  private tick = (): void => {
    if (!this.running) return;
    this.timer = null;
    if (this.speed === 0) {
      for (let i = 0; i < BURST_CHUNK; i++) {
        const sample = this.source.next();
        if (sample === null) {
          this.finish();
          return;
        }
        this.emit(sample);
      }
      this.timer = setTimeout(this.tick, 0);
      return;
    }
    const sample = this.pending ?? this.source.next();
    this.pending = null;
    if (sample === null) {
      this.finish();
      return;
    }
    if (this.originMs === null) this.originMs = sample.tMs;
    const due = this.wallStart + (sample.tMs - this.originMs) / this.speed;
    const delay = due - this.now();
    if (delay > 0) {
      this.pending = sample;
      this.timer = setTimeout(this.tick, delay);
      return;
    }
    this.emit(sample);
    this.timer = setTimeout(this.tick, 0);
  };
}
