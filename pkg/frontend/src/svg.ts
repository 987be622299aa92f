/**
 * Minimal deterministic SVG chart builder: fixed canvas, nice ticks, line
 * series with gap handling (non-finite samples split the polyline), linear or
 * log10 y-axis, legend. Output depends only on the inputs.
 */

export interface Series {
  x: number[];
  y: number[];
  label: string;
  color: string;
  dash?: string;
}

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  logY?: boolean;
  width?: number;
  height?: number;
}

const MARGIN = { left: 64, right: 16, top: 36, bottom: 44 };

function fmt(v: number): string {
  if (!Number.isFinite(v)) return "0";
  const s = v.toPrecision(6);
  return s.includes(".") || s.includes("e") ? s.replace(/\.?0+($|e)/, "$1") : s;
}

function niceTicks(lo: number, hi: number, n = 6): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step0 = span / Math.max(1, n - 1);
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  const candidates = [1, 2, 5, 10].map((m) => m * mag);
  const step = candidates.find((c) => span / c <= n) ?? candidates[3];
  const first = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = first; v <= hi + 1e-12 * span; v += step) {
    ticks.push(Math.abs(v) < 1e-12 * span ? 0 : v);
  }
  return ticks;
}

function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(lo); e <= Math.floor(hi); e++) {
    ticks.push(e);
  }
  if (ticks.length > 8) {
    const stride = Math.ceil(ticks.length / 8);
    return ticks.filter((_, i) => i % stride === 0);
  }
  return ticks;
}

export function renderChart(series: Series[], opts: ChartOptions): string {
  const width = opts.width ?? 720;
  const height = opts.height ?? 480;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  const logY = opts.logY ?? false;

  const xs: number[] = [];
  const ys: number[] = [];
  for (const s of series) {
    for (let i = 0; i < s.x.length; i++) {
      const yv = s.y[i];
      if (Number.isFinite(s.x[i]) && Number.isFinite(yv) && (!logY || yv > 0)) {
        xs.push(s.x[i]);
        ys.push(logY ? Math.log10(yv) : yv);
      }
    }
  }
  if (xs.length === 0) {
    throw new Error("no finite data to plot");
  }
  let xLo = Math.min(...xs);
  let xHi = Math.max(...xs);
  let yLo = Math.min(...ys);
  let yHi = Math.max(...ys);
  if (xHi === xLo) xHi = xLo + 1;
  if (yHi === yLo) {
    yLo -= 0.5;
    yHi += 0.5;
  }
  const yPad = 0.04 * (yHi - yLo);
  yLo -= yPad;
  yHi += yPad;

  const px = (x: number) => MARGIN.left + ((x - xLo) / (xHi - xLo)) * plotW;
  const py = (y: number) => MARGIN.top + (1 - (y - yLo) / (yHi - yLo)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(
    `<text x="${width / 2}" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">${opts.title}</text>`
  );

  // axes frame
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#444" stroke-width="1"/>`
  );

  for (const t of niceTicks(xLo, xHi)) {
    const x = px(t);
    parts.push(`<line x1="${fmt(x)}" y1="${MARGIN.top + plotH}" x2="${fmt(x)}" y2="${MARGIN.top + plotH + 4}" stroke="#444"/>`);
    parts.push(
      `<text x="${fmt(x)}" y="${MARGIN.top + plotH + 18}" text-anchor="middle" font-family="sans-serif" font-size="11">${fmt(t)}</text>`
    );
  }
  const yTicks = logY ? logTicks(yLo, yHi) : niceTicks(yLo, yHi);
  for (const t of yTicks) {
    const y = py(t);
    parts.push(`<line x1="${MARGIN.left - 4}" y1="${fmt(y)}" x2="${MARGIN.left}" y2="${fmt(y)}" stroke="#444"/>`);
    const label = logY ? `1e${fmt(t)}` : fmt(t);
    parts.push(
      `<text x="${MARGIN.left - 8}" y="${fmt(y + 4)}" text-anchor="end" font-family="sans-serif" font-size="11">${label}</text>`
    );
    parts.push(
      `<line x1="${MARGIN.left}" y1="${fmt(y)}" x2="${MARGIN.left + plotW}" y2="${fmt(y)}" stroke="#ddd" stroke-width="0.5"/>`
    );
  }
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${height - 8}" text-anchor="middle" font-family="sans-serif" font-size="12">${opts.xLabel}</text>`
  );
  parts.push(
    `<text x="16" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 16 ${MARGIN.top + plotH / 2})">${opts.yLabel}</text>`
  );

  for (const s of series) {
    const segments: string[][] = [];
    let current: string[] = [];
    for (let i = 0; i < s.x.length; i++) {
      const yv = s.y[i];
      const ok = Number.isFinite(s.x[i]) && Number.isFinite(yv) && (!logY || yv > 0);
      if (ok) {
        current.push(`${fmt(px(s.x[i]))},${fmt(py(logY ? Math.log10(yv) : yv))}`);
      } else if (current.length > 0) {
        segments.push(current);
        current = [];
      }
    }
    if (current.length > 0) segments.push(current);
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    for (const seg of segments) {
      parts.push(
        `<polyline fill="none" stroke="${s.color}" stroke-width="1.5"${dash} points="${seg.join(" ")}"/>`
      );
    }
  }

  // legend
  let ly = MARGIN.top + 14;
  for (const s of series) {
    const lx = MARGIN.left + plotW - 150;
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    parts.push(`<line x1="${lx}" y1="${ly - 4}" x2="${lx + 24}" y2="${ly - 4}" stroke="${s.color}" stroke-width="1.5"${dash}/>`);
    parts.push(
      `<text x="${lx + 30}" y="${ly}" font-family="sans-serif" font-size="11">${s.label}</text>`
    );
    ly += 16;
  }

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
