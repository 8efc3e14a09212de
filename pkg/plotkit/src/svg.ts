/**
 * Minimal deterministic SVG line charts: fixed viewport, linear or log-10
 * vertical axis, polyline series with a legend, optional vertical markers
 * and a footer note.  Output depends only on the input spec, so re-renders
 * are byte-identical.
 */

export interface Series {
  label: string;
  color: string;
  points: Array<[number, number]>;
}

export interface FigureSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  logY?: boolean;
  markers?: Array<{ x: number; label: string }>;
  note?: string;
}

const WIDTH = 760;
const HEIGHT = 480;
const MARGIN = { left: 72, right: 24, top: 40, bottom: 64 };

const fmt = (v: number): string => {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(2);
  return Number(v.toPrecision(6)).toString();
};

const coord = (v: number): string => v.toFixed(2);

function ticks(lo: number, hi: number, n = 5): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / n)));
  const err = span / (n * step);
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = mult * step;
  const out: number[] = [];
  for (let v = Math.ceil(lo / s) * s; v <= hi + 1e-12 * span; v += s) out.push(v);
  return out;
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderFigure(spec: FigureSpec): string {
  const pts = spec.series.flatMap((s) => s.points);
  if (pts.length === 0) {
    throw new Error("nothing to draw: every series is empty");
  }
  const xs = pts.map((p) => p[0]);
  const yRaw = pts.map((p) => p[1]);
  const toY = spec.logY ? (v: number) => Math.log10(v) : (v: number) => v;
  if (spec.logY && yRaw.some((v) => v <= 0)) {
    throw new Error("log-scale figure requires strictly positive values");
  }
  const ys = yRaw.map(toY);
  let xLo = Math.min(...xs);
  let xHi = Math.max(...xs);
  let yLo = Math.min(...ys);
  let yHi = Math.max(...ys);
  if (xHi === xLo) [xLo, xHi] = [xLo - 1, xHi + 1];
  if (yHi === yLo) [yLo, yHi] = [yLo - 1, yHi + 1];
  const pad = 0.04 * (yHi - yLo);
  yLo -= pad;
  yHi += pad;

  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const px = (x: number) => MARGIN.left + ((x - xLo) / (xHi - xLo)) * plotW;
  const py = (y: number) => MARGIN.top + plotH - ((y - yLo) / (yHi - yLo)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="16">${esc(spec.title)}</text>`,
  );

  for (const t of ticks(xLo, xHi)) {
    const x = coord(px(t));
    parts.push(
      `<line x1="${x}" y1="${MARGIN.top}" x2="${x}" y2="${MARGIN.top + plotH}" stroke="#ddd"/>`,
      `<text x="${x}" y="${MARGIN.top + plotH + 18}" text-anchor="middle" font-size="11">${fmt(t)}</text>`,
    );
  }
  for (const t of ticks(yLo, yHi)) {
    const y = coord(py(t));
    const label = spec.logY ? `1e${fmt(t)}` : fmt(t);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + plotW}" y2="${y}" stroke="#ddd"/>`,
      `<text x="${MARGIN.left - 6}" y="${y}" text-anchor="end" dominant-baseline="middle" font-size="11">${label}</text>`,
    );
  }
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#333"/>`,
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 26}" text-anchor="middle" font-size="13">${esc(spec.xLabel)}</text>`,
    `<text x="18" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="13" transform="rotate(-90 18 ${MARGIN.top + plotH / 2})">${esc(spec.yLabel)}</text>`,
  );

  for (const m of spec.markers ?? []) {
    if (m.x < xLo || m.x > xHi) continue;
    const x = coord(px(m.x));
    parts.push(
      `<line x1="${x}" y1="${MARGIN.top}" x2="${x}" y2="${MARGIN.top + plotH}" stroke="#b22" stroke-dasharray="5,4"/>`,
      `<text x="${x}" y="${MARGIN.top - 6}" text-anchor="middle" font-size="11" fill="#b22">${esc(m.label)}</text>`,
    );
  }

  spec.series.forEach((s, i) => {
    const path = s.points
      .map((p) => `${coord(px(p[0]))},${coord(py(toY(p[1])))}`)
      .join(" ");
    parts.push(
      `<polyline points="${path}" fill="none" stroke="${s.color}" stroke-width="1.6"/>`,
    );
    const ly = MARGIN.top + 14 + 16 * i;
    parts.push(
      `<line x1="${MARGIN.left + plotW - 110}" y1="${ly - 4}" x2="${MARGIN.left + plotW - 86}" y2="${ly - 4}" stroke="${s.color}" stroke-width="2"/>`,
      `<text x="${MARGIN.left + plotW - 80}" y="${ly}" font-size="12">${esc(s.label)}</text>`,
    );
  });

  if (spec.note) {
    parts.push(
      `<text x="${MARGIN.left}" y="${HEIGHT - 8}" font-size="11" fill="#555">${esc(spec.note)}</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
