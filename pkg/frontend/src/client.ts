// WebSocket session client: one socket, one server session. Handles
// the hello handshake, queues outbound messages while disconnected,
// reconnects with exponential backoff, and restores the session id and
// active label after a reconnect. Incoming frames are parsed and
// handed to callbacks; nothing here interprets metrics.

import type { ClientMsg, ServerEvent } from "./protocol.js";
import {
  encode,
  endMsg,
  helloMsg,
  isHelloAck,
  labelMsg,
  parseServerEvent,
  sampleMsg,
} from "./protocol.js";
import type { Connection } from "./state.js";

export interface SocketLike {
  readyState: number;
  send(data: string): void;
  close(code?: number, reason?: string): void;
  onopen: (() => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: ((ev: { code: number }) => void) | null;
  onerror: (() => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

const OPEN = 1;

export interface ClientCallbacks {
  onEvent: (evt: ServerEvent, atMs: number) => void;
  onStatus: (status: Connection) => void;
  onQueued: (count: number) => void;
}

export interface ClientOptions {
  url: string;
  algo: string;
  seed?: number | null;
  windowSize?: number;
  rateHz?: number;
  socketFactory?: SocketFactory;
  backoffBaseMs?: number;
  backoffCapMs?: number;
  now?: () => number;
}

export class SessionClient {
  readonly url: string;
  readonly algo: string;
  private readonly seed: number | null;
  private readonly windowSize?: number;
  private readonly rateHz?: number;
  private readonly factory: SocketFactory;
  private readonly backoffBase: number;
  private readonly backoffCap: number;
  private readonly now: () => number;
  private readonly callbacks: ClientCallbacks;

  private socket: SocketLike | null = null;
  private queue: ClientMsg[] = [];
  private attempts = 0;
  private reconnectTimer: ReturnType<typeof setTimeout> | null = null;
  private closedByUser = false;
  private sessionId: string | null = null;
  /** undefined = never labeled; null = explicitly unlabeled. */
  private requestedLabel: string | null | undefined = undefined;

  constructor(opts: ClientOptions, callbacks: ClientCallbacks) {
    this.url = opts.url;
    this.algo = opts.algo;
    this.seed = opts.seed ?? null;
    this.windowSize = opts.windowSize;
    this.rateHz = opts.rateHz;
    this.factory = opts.socketFactory ?? ((url) => new WebSocket(url) as SocketLike);
    this.backoffBase = opts.backoffBaseMs ?? 500;
    this.backoffCap = opts.backoffCapMs ?? 10_000;
    this.now = opts.now ?? Date.now;
    this.callbacks = callbacks;
  }

  connect(): void {
    this.closedByUser = false;
    this.callbacks.onStatus(this.attempts === 0 ? "connecting" : "reconnecting");
    const socket = this.factory(this.url);
    this.socket = socket;
    socket.onopen = () => this.onOpen(socket);
    socket.onmessage = (ev) => this.onFrame(ev.data);
    socket.onerror = () => {};
    socket.onclose = () => this.onClose(socket);
  }

  private onOpen(socket: SocketLike): void {
    this.attempts = 0;
    this.callbacks.onStatus("open");
    socket.send(
      encode(
        helloMsg({
          algo: this.algo,
          seed: this.seed,
          windowSize: this.windowSize,
          rateHz: this.rateHz,
          session: this.sessionId,
        }),
      ),
    );
    // A reconnect starts a fresh server session under the old id, so
    // the active label must be re-announced before queued data flows.
    if (this.requestedLabel !== undefined) {
      socket.send(encode(labelMsg(this.requestedLabel)));
    }
    const pending = this.queue;
    this.queue = [];
    for (const msg of pending) socket.send(encode(msg));
    this.callbacks.onQueued(0);
  }

  private onFrame(data: unknown): void {
    const evt = parseServerEvent(data);
    if (evt === null) return;
    if (isHelloAck(evt)) this.sessionId = evt.session;
    this.callbacks.onEvent(evt, this.now());
  }

  private onClose(socket: SocketLike): void {
    if (this.socket !== socket) return;
    this.socket = null;
    if (this.closedByUser) {
      this.callbacks.onStatus("closed");
      return;
    }
    this.callbacks.onStatus("reconnecting");
    const delay = Math.min(this.backoffBase * 2 ** this.attempts, this.backoffCap);
    this.attempts += 1;
    this.reconnectTimer = setTimeout(() => this.connect(), delay);
  }

  get isOpen(): boolean {
    return this.socket !== null && this.socket.readyState === OPEN;
  }

  get session(): string | null {
    return this.sessionId;
  }

  get queuedCount(): number {
    return this.queue.length;
  }

  get activeLabel(): string | null | undefined {
    return this.requestedLabel;
  }

  send(msg: ClientMsg): void {
    if (this.isOpen) {
      this.socket!.send(encode(msg));
    } else {
      this.queue.push(msg);
      this.callbacks.onQueued(this.queue.length);
    }
  }

  /** Set the active activity; repeated requests for the same label are no-ops. */
  setLabel(name: string | null): void {
    if (name === this.requestedLabel) return;
    this.requestedLabel = name;
    this.send(labelMsg(name));
  }

  sendSample(tMs: number, values: readonly number[]): void {
    this.send(sampleMsg(tMs, values));
  }

  end(): void {
    this.send(endMsg());
  }

  close(): void {
    this.closedByUser = true;
    if (this.reconnectTimer !== null) {
      clearTimeout(this.reconnectTimer);
      this.reconnectTimer = null;
    }
    const socket = this.socket;
    if (socket !== null) {
      socket.close();
    } else {
      this.callbacks.onStatus("closed");
    }
  }
}
