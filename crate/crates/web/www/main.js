import init, { Explorer } from "./pkg/risp_dyn_web.js";

const LINES = [-0.9, -0.75, -0.6, -0.45, -0.3, -0.15, 0, 0.15, 0.3, 0.45, 0.6, 0.75, 0.9];
const PI = Math.PI;
const $ = (id) => document.getElementById(id);

let ex = null;
let beltCache = null;
let curveCache = null;

function showError(e) {
  $("error").textContent = e ? String(e.message ?? e) : "";
}

function toCanvas(c, t1, t2) {
  const s = c.width;
  return [((t1 + PI) / (2 * PI)) * s, s - ((t2 + PI) / (2 * PI)) * s];
}

function drawTorus() {
  const c = $("torus");
  const g = c.getContext("2d");
  g.clearRect(0, 0, c.width, c.height);
  const n = Number($("iters").value);
  $("iters-val").textContent = n;
  if (!ex) return;

  if ($("overlay").checked && ex.isSimple()) {
    for (const b of beltCache?.belts ?? []) {
      const [, y0] = toCanvas(c, 0, b.start_angle);
      const [, y1] = toCanvas(c, 0, b.end_angle);
      g.fillStyle = "rgba(255, 215, 0, 0.18)";
      if (b.start_angle <= b.end_angle) g.fillRect(0, y1, c.width, y0 - y1);
      else {
        g.fillRect(0, 0, c.width, y0);
        g.fillRect(0, y1, c.width, c.height - y1);
      }
    }
    g.fillStyle = "#2a9d8f";
    for (let i = 0; curveCache && i < curveCache.length; i += 2) {
      const [x, y] = toCanvas(c, curveCache[i + 1], curveCache[i]);
      g.fillRect(x - 1, y - 1, 2, 2);
    }
  }

  try {
    const ppl = Math.max(10, Math.min(4000, Number($("ppl").value) || 720));
    const pts = ex.orbitFrame(new Float64Array(LINES), ppl, n);
    for (let i = 0; i < pts.length; i += 3) {
      const [x, y] = toCanvas(c, pts[i], pts[i + 1]);
      g.fillStyle = pts[i + 2] ? "#999" : "#1f4e9c";
      g.fillRect(x - 0.8, y - 0.8, 1.6, 1.6);
    }
    showError(null);
  } catch (e) {
    showError(e);
  }
}

function drawPsi() {
  const c = $("psi");
  const g = c.getContext("2d");
  g.clearRect(0, 0, c.width, c.height);
  if (!ex || !ex.isSimple()) return;
  const ymax = 3;
  const X = (t) => ((t + PI) / (2 * PI)) * c.width;
  const Y = (v) => c.height - (Math.min(v, ymax) / ymax) * c.height;
  g.strokeStyle = "#ccc";
  g.beginPath();
  g.moveTo(0, Y(1));
  g.lineTo(c.width, Y(1));
  g.stroke();
  const prof = ex.psiProfile(600);
  for (const [k, color] of [[1, "#c0392b"], [2, "#1e8449"]]) {
    g.fillStyle = color;
    for (let i = 0; i < prof.length; i += 3) {
      if (Number.isFinite(prof[i + k])) g.fillRect(X(prof[i]) - 1, Y(prof[i + k]) - 1, 2, 2);
    }
  }
}

function loadBelts() {
  beltCache = null;
  curveCache = null;
  if (!ex.isSimple()) {
    $("belts").textContent = "not a simple skew-product";
    return;
  }
  try {
    beltCache = JSON.parse(ex.belts());
    $("belts").textContent = beltCache.belts.length
      ? beltCache.belts.map((b) => `(${b.start_angle.toFixed(4)}, ${b.end_angle.toFixed(4)})  ${b.start_kind} / ${b.end_kind}`).join("\n")
      : "none";
  } catch (e) {
    $("belts").textContent = String(e.message ?? e);
  }
  try {
    curveCache = ex.fixedCurves(2048);
  } catch (_) {
    curveCache = null;
  }
}

function use(explorer) {
  ex?.free();
  ex = explorer;
  loadBelts();
  drawPsi();
  drawTorus();
  $("fiber").textContent = "(click the torus)";
}

$("torus").addEventListener("click", (ev) => {
  if (!ex || !ex.isSimple()) return;
  const c = $("torus");
  const r = c.getBoundingClientRect();
  const t2 = PI - ((ev.clientY - r.top) / r.height) * 2 * PI;
  try {
    const f = JSON.parse(ex.classifyFiber(t2));
    $("fiber").textContent = JSON.stringify(f, null, 1);
  } catch (e) {
    $("fiber").textContent = String(e.message ?? e);
  }
});

await init();
$("example").addEventListener("change", () => use(Explorer.fromExample($("example").value)));
$("load-json").addEventListener("click", () => {
  try {
    use(Explorer.fromJson($("json").value));
  } catch (e) {
    showError(e);
  }
});
for (const id of ["iters", "ppl", "overlay"]) $(id).addEventListener("input", drawTorus);
use(Explorer.fromExample($("example").value));
