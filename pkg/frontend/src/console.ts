// The operator console behind the UI: owns the store, the session
// client and at most one running streamer. Every operator gesture is a
// method here, so the whole console can be driven headlessly in tests
// against a scripted server.

import type { SocketFactory } from "./client.js";
import { SessionClient } from "./client.js";
import type { SampleSource } from "./generator.js";
import { CsvSource, LiveWaveformSource, Streamer } from "./generator.js";
import { Store } from "./state.js";

export interface ConnectSettings {
  url: string;
  algo: string;
  seed?: number | null;
  windowSize?: number;
  rateHz?: number;
}

export interface ConsoleOptions {
  socketFactory?: SocketFactory;
  now?: () => number;
  backoffBaseMs?: number;
  backoffCapMs?: number;
  generatorSeed?: number;
}

export class ConsoleApp {
  readonly store: Store;
  private client: SessionClient | null = null;
  private streamer: Streamer | null = null;
  private settings: ConnectSettings | null = null;
  private readonly opts: ConsoleOptions;

  constructor(opts: ConsoleOptions = {}) {
    this.opts = opts;
    this.store = new Store();
  }

  get state() {
    return this.store.state;
  }

  connect(settings: ConnectSettings): void {
    this.settings = settings;
    this.client?.close();
    this.store.dispatch({ kind: "reset", algo: settings.algo });
    this.client = new SessionClient(
      {
        url: settings.url,
        algo: settings.algo,
        seed: settings.seed,
        windowSize: settings.windowSize,
        rateHz: settings.rateHz,
        socketFactory: this.opts.socketFactory,
        now: this.opts.now,
        backoffBaseMs: this.opts.backoffBaseMs,
        backoffCapMs: this.opts.backoffCapMs,
      },
      {
        onEvent: (event, atMs) => this.store.dispatch({ kind: "event", event, atMs }),
        onStatus: (status) => this.store.dispatch({ kind: "socket", status }),
        onQueued: (count) => this.store.dispatch({ kind: "queued", count }),
      },
    );
    this.client.connect();
  }

  /** New algorithm means a new session: fresh model, curve starts over. */
  switchAlgorithm(algo: string): void {
    if (this.settings === null) throw new Error("connect first");
    this.stopStream();
    this.connect({ ...this.settings, algo });
  }

  defineActivity(name: string): void {
    if (!name) throw new Error("activity name must be non-empty");
    this.store.dispatch({ kind: "define-label", name });
  }

  selectLabel(name: string | null): void {
    if (name !== null && !this.state.labels.includes(name)) this.defineActivity(name);
    this.store.dispatch({ kind: "request-label", name });
    this.requireClient().setLabel(name);
  }

  startGenerator(speed = 1, rateHz?: number): void {
    // Speed 0 means "as fast as possible", which never terminates on an
    // endless source; only finite replays may use it.
    if (speed <= 0) throw new Error("the live generator needs a positive speed");
    const rate = rateHz ?? this.state.rateHz;
    const source = new LiveWaveformSource(() => this.state.requestedLabel ?? null, {
      rateHz: rate,
      seed: this.opts.generatorSeed,
    });
    this.startStream(source, { speed, applyLabels: false });
  }

  startCsvReplay(text: string, speed = 1): void {
    this.startStream(new CsvSource(text), { speed, applyLabels: true });
  }

  private startStream(source: SampleSource, opts: { speed: number; applyLabels: boolean }): void {
    const client = this.requireClient();
    this.stopStream();
    this.streamer = new Streamer(client, source, {
      speed: opts.speed,
      applyLabels: opts.applyLabels,
      now: this.opts.now,
      onDone: () => this.store.dispatch({ kind: "streaming", on: false }),
    });
    this.store.dispatch({ kind: "streaming", on: true });
    this.streamer.start();
  }

  stopStream(): void {
    if (this.streamer === null) return;
    this.streamer.stop();
    this.streamer = null;
    this.store.dispatch({ kind: "streaming", on: false });
  }

  endSession(): void {
    this.stopStream();
    this.client?.end();
  }

  shutdown(): void {
    this.stopStream();
    this.client?.close();
    this.client = null;
  }

  private requireClient(): SessionClient {
    if (this.client === null) throw new Error("connect first");
    return this.client;
  }
}
