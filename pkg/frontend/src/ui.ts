// DOM wiring. Builds the panels once, then re-renders them from state
// snapshots pushed by the store. All text comes from format.ts.

import type { ConsoleApp } from "./console.js";
import {
  accuracyText,
  connectionText,
  countsText,
  feedRowText,
  latencyText,
  macroF1Text,
  perClassRows,
  sparklinePoints,
  sessionText,
} from "./format.js";
import type { ConsoleState } from "./state.js";

const ALGORITHMS = ["iknn", "idt", "irf", "iadaboost", "inb", "nse"];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text) node.textContent = text;
  return node;
}

export function mountConsole(root: HTMLElement, app: ConsoleApp): void {
  // --- settings panel: algorithm, window size, rate, seed ---
  const urlInput = el("input", { value: defaultUrl(), size: "36" });
  const algoSelect = el("select");
  for (const algo of ALGORITHMS) algoSelect.append(el("option", { value: algo }, algo));
  algoSelect.value = "inb";
  const windowInput = el("input", { value: "40", size: "4", type: "number", min: "1" });
  const rateInput = el("input", { value: "20", size: "4", type: "number", min: "1" });
  const seedInput = el("input", { value: "0", size: "6", type: "number" });
  const connectBtn = el("button", {}, "connect");
  connectBtn.onclick = () =>
    app.connect({
      url: urlInput.value,
      algo: algoSelect.value,
      seed: seedInput.value === "" ? null : Number(seedInput.value),
      windowSize: Number(windowInput.value),
      rateHz: Number(rateInput.value),
    });
  algoSelect.onchange = () => {
    if (app.state.sessionId !== null) app.switchAlgorithm(algoSelect.value);
  };
  const statusSpan = el("span", { class: "status" });
  const sessionSpan = el("span", { class: "session" });
  const settings = el("div", { class: "panel" });
  settings.append(
    labeled("server", urlInput),
    labeled("algorithm", algoSelect),
    labeled("window", windowInput),
    labeled("rate Hz", rateInput),
    labeled("seed", seedInput),
    connectBtn,
    statusSpan,
    sessionSpan,
  );

  // --- label panel ---
  const labelButtons = el("div", { class: "labels" });
  const newActivity = el("input", { placeholder: "new activity", size: "14" });
  const addBtn = el("button", {}, "add");
  addBtn.onclick = () => {
    const name = newActivity.value.trim();
    if (!name) return;
    app.defineActivity(name);
    newActivity.value = "";
  };
  const labelPanel = el("div", { class: "panel" });
  labelPanel.append(el("strong", {}, "activity: "), labelButtons, newActivity, addBtn);

  // --- stream controls ---
  const speedInput = el("input", { value: "1", size: "4", type: "number", min: "0", step: "0.5" });
  const startBtn = el("button", {}, "start generator");
  startBtn.onclick = () => app.startGenerator(Number(speedInput.value));
  const stopBtn = el("button", {}, "stop");
  stopBtn.onclick = () => app.stopStream();
  const endBtn = el("button", {}, "end session");
  endBtn.onclick = () => app.endSession();
  const fileInput = el("input", { type: "file", accept: ".csv" });
  fileInput.onchange = async () => {
    const file = fileInput.files?.[0];
    if (file) app.startCsvReplay(await file.text(), Number(speedInput.value));
  };
  const streamPanel = el("div", { class: "panel" });
  streamPanel.append(
    labeled("speed x", speedInput),
    startBtn,
    stopBtn,
    endBtn,
    labeled("replay CSV", fileInput),
  );

  // --- metrics panel ---
  const accuracySpan = el("span", { class: "accuracy" }, "--");
  const f1Span = el("span");
  const countsSpan = el("span");
  const latencySpan = el("span");
  const spark = el("canvas", { width: "360", height: "60", class: "spark" });
  const classTable = el("table", { class: "classes" });
  const metricsPanel = el("div", { class: "panel" });
  metricsPanel.append(
    labeled("accuracy", accuracySpan),
    labeled("macro F1", f1Span),
    countsSpan,
    el("br"),
    spark,
    classTable,
    el("br"),
    labeled("latency", latencySpan),
  );

  // --- feed + notices ---
  const feedList = el("pre", { class: "feed" });
  const noticeSpan = el("div", { class: "notice" });

  root.append(settings, labelPanel, streamPanel, metricsPanel, noticeSpan, feedList);

  function render(state: ConsoleState): void {
    statusSpan.textContent = connectionText(state);
    sessionSpan.textContent = sessionText(state);
    accuracySpan.textContent = accuracyText(state);
    f1Span.textContent = macroF1Text(state);
    countsSpan.textContent = countsText(state);
    latencySpan.textContent = latencyText(state);
    startBtn.textContent = state.streaming ? "generator running" : "start generator";

    labelButtons.replaceChildren(
      ...[...state.labels, null].map((name) => {
        const btn = el("button", {}, name ?? "(clear)");
        if (name === state.requestedLabel) btn.classList.add("active");
        if (name !== null && name === state.ackedLabel?.name) btn.classList.add("acked");
        btn.onclick = () => app.selectLabel(name);
        return btn;
      }),
    );

    const rows = perClassRows(state);
    classTable.replaceChildren(
      tableRow(["class", "windows", "correct", "share"], "th"),
      ...rows.map((r) => tableRow([r.name, String(r.windows), String(r.correct), r.share], "td")),
    );

    feedList.textContent = state.feed.slice(-25).map(feedRowText).reverse().join("\n");

    const notices: string[] = [];
    if (state.lastError !== null) notices.push(`error ${state.lastError.code}: ${state.lastError.message}`);
    if (state.droppedTotal > 0) notices.push(`${state.droppedTotal} samples dropped by the server`);
    if (state.queuedSends > 0) notices.push(`disconnected: ${state.queuedSends} messages queued`);
    noticeSpan.textContent = notices.join(" | ");

    const ctx = spark.getContext("2d");
    if (ctx !== null) {
      ctx.clearRect(0, 0, spark.width, spark.height);
      const points = sparklinePoints(state, spark.width, spark.height);
      if (points.length > 1) {
        ctx.beginPath();
        ctx.moveTo(points[0][0], points[0][1]);
        for (const [x, y] of points.slice(1)) ctx.lineTo(x, y);
        ctx.strokeStyle = "#2a7";
        ctx.stroke();
      }
    }
  }

  app.store.subscribe(render);
  render(app.state);
}

function labeled(text: string, control: HTMLElement): HTMLElement {
  const wrap = el("label", { class: "field" });
  wrap.append(el("span", {}, `${text}: `), control);
  return wrap;
}

function tableRow(cells: string[], kind: "td" | "th"): HTMLTableRowElement {
  const tr = el("tr");
  tr.append(...cells.map((c) => el(kind, {}, c)));
  return tr;
}

function defaultUrl(): string {
  const host = location.hostname || "127.0.0.1";
  return `ws://${host}:8765/stream`;
}
