import { ApiClient, ApiError } from "./api.js";
import { buildChart } from "./chart.js";
import { ReviewSession } from "./session.js";
import type { Source } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const session = new ReviewSession(new ApiClient(""));

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function setStatus(text: string, isError = false): void {
  const status = el<HTMLSpanElement>("status");
  status.textContent = text;
  status.className = isError ? "status error" : "status";
}

function svgElement(tag: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  return node;
}

function renderChart(): void {
  const host = el<HTMLDivElement>("chart");
  host.textContent = "";
  const payload = session.payload;
  if (!payload || payload.keys.length === 0) {
    host.textContent = "No data in this window.";
    return;
  }
  const flags = payload.keys.map((k) => session.currentFlag(k));
  const layout = buildChart(
    payload,
    [...session.visibleColumns],
    flags,
    session.dirtyKeys(),
    host.clientWidth || 960,
    380,
  );
  const svg = svgElement("svg", {
    viewBox: `0 0 ${layout.width} ${layout.height}`,
    width: "100%",
  }) as SVGSVGElement;

  for (const band of layout.bands) {
    svg.appendChild(
      svgElement("rect", {
        x: `${band.x0}`,
        y: `${layout.plot.y}`,
        width: `${Math.max(1, band.x1 - band.x0)}`,
        height: `${layout.plot.h}`,
        class: band.kind === "flagged" ? "band-flagged" : "band-dirty",
      }),
    );
  }
  for (const area of layout.areas) {
    svg.appendChild(
      svgElement("path", { d: area.d, fill: area.color, "fill-opacity": "0.8" }),
    );
  }
  for (const tick of layout.yTicks) {
    svg.appendChild(
      svgElement("line", {
        x1: `${layout.plot.x}`,
        x2: `${layout.plot.x + layout.plot.w}`,
        y1: `${tick.pos}`,
        y2: `${tick.pos}`,
        class: "gridline",
      }),
    );
    const label = svgElement("text", {
      x: `${layout.plot.x - 6}`,
      y: `${tick.pos + 4}`,
      class: "tick-label",
      "text-anchor": "end",
    });
    label.textContent = tick.label;
    svg.appendChild(label);
  }
  for (const tick of layout.xTicks) {
    const label = svgElement("text", {
      x: `${tick.pos}`,
      y: `${layout.plot.y + layout.plot.h + 18}`,
      class: "tick-label",
      "text-anchor": "middle",
    });
    label.textContent = tick.label;
    svg.appendChild(label);
  }

  svg.addEventListener("click", (event) => {
    const rect = svg.getBoundingClientRect();
    const x = ((event.clientX - rect.left) / rect.width) * layout.width;
    const key = layout.keyAt(x);
    if (key) {
      session.toggleFlag(key);
      render();
    }
  });
  host.appendChild(svg);
}

function renderLegend(): void {
  const legend = el<HTMLDivElement>("legend");
  legend.textContent = "";
  const meta = session.meta;
  if (!meta) return;
  meta.columns[session.source].forEach((column, i) => {
    const label = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = session.visibleColumns.has(column);
    box.addEventListener("change", () => {
      session.toggleColumn(column);
      render();
    });
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.background = `var(--c${i % 10})`;
    label.append(box, swatch, column.replace(/^POWER_(ELEXM|NGEM)_|_MW$/g, ""));
    legend.appendChild(label);
  });
}

function renderFlagged(): void {
  const list = el<HTMLUListElement>("flagged");
  list.textContent = "";
  for (const key of session.flaggedKeys()) {
    const item = document.createElement("li");
    const dirty = session.dirtyKeys().has(key) ? " (unsaved)" : "";
    item.textContent = `${key}${dirty}`;
    item.addEventListener("click", () => {
      session.toggleFlag(key);
      render();
    });
    list.appendChild(item);
  }
}

function render(): void {
  el<HTMLSpanElement>("window-label").textContent =
    `${session.windowStartUtc} .. ${session.windowEndUtc}`;
  const save = el<HTMLButtonElement>("save");
  save.disabled = session.dirtyCount === 0;
  save.textContent = session.dirtyCount ? `Save ${session.dirtyCount} edit(s)` : "Save";
  renderLegend();
  renderChart();
  renderFlagged();
}

async function guard(action: () => Promise<void>): Promise<void> {
  try {
    await action();
    setStatus("");
  } catch (error) {
    if (error instanceof ApiError) setStatus(`${error.status}: ${error.message}`, true);
    else setStatus(`service unreachable: ${error}`, true);
  }
  render();
}

async function boot(): Promise<void> {
  el("prev").addEventListener("click", () => guard(() => session.previousWeek()));
  el("next").addEventListener("click", () => guard(() => session.nextWeek()));
  el("save").addEventListener("click", () =>
    guard(async () => {
      const applied = await session.save();
      setStatus(`saved ${applied} flag update(s)`);
    }),
  );
  el<HTMLSelectElement>("source").addEventListener("change", (event) =>
    guard(async () => {
      const value = (event.target as HTMLSelectElement).value as Source;
      const switched = await session.setSource(value);
      if (!switched) {
        setStatus("save or undo pending edits before switching source", true);
        (event.target as HTMLSelectElement).value = session.source;
      }
    }),
  );
  await guard(() => session.init());
}

boot();
