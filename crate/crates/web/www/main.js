// Expects the wasm-bindgen output (--target web) in ./pkg.
import init, { solve_profile, cloud_bundle, cap_check } from "./pkg/kplus_web.js";

const $ = (id) => document.getElementById(id);
const call = (f) => { try { return JSON.parse(f()); } catch (e) { return { error: String(e) }; } };
const show = (el, v) => { el.textContent = JSON.stringify(v, (k, x) => (typeof x === "number" ? +x.toFixed(6) : x), 2); };

function slider(id) {
  const upd = () => { $(id + "v").textContent = $(id).value; };
  $(id).addEventListener("input", upd);
  upd();
}

function drawProfile(obst, r) {
  const cv = $("prof"), g = cv.getContext("2d"), s = cv.width / 6, o = cv.width / 2;
  const X = (p) => [o + s * p[0], o - s * p[1]];
  g.clearRect(0, 0, cv.width, cv.height);
  g.fillStyle = "#ccc";
  g.beginPath();
  if (obst === "disk") g.arc(o, o, s, 0, 2 * Math.PI);
  else g.rect(o - s, o - s, 2 * s, 2 * s);
  g.fill();
  if (!r.boundary) return;
  g.fillStyle = "rgba(40,100,200,.35)";
  g.beginPath();
  r.boundary.forEach((p, i) => (i ? g.lineTo(...X(p)) : g.moveTo(...X(p))));
  g.closePath();
  g.fill();
  g.strokeStyle = "#1a4fa0";
  g.lineWidth = 2;
  g.beginPath();
  r.free_chain.forEach((p, i) => (i ? g.lineTo(...X(p)) : g.moveTo(...X(p))));
  g.stroke();
}

const pts = [];
function drawCloud(r) {
  const cv = $("cloud"), g = cv.getContext("2d");
  g.clearRect(0, 0, cv.width, cv.height);
  if (r && r.hull && r.hull.length > 1) {
    g.strokeStyle = "#888";
    g.beginPath();
    r.hull.forEach((i, k) => (k ? g.lineTo(pts[i][0], -pts[i][1]) : g.moveTo(pts[i][0], -pts[i][1])));
    g.closePath();
    g.stroke();
  }
  pts.forEach((p, i) => {
    g.fillStyle = "#000";
    g.fillRect(p[0] - 2, -p[1] - 2, 4, 4);
    if (r && r.sigma) {
      const d = r.sigma[i];
      g.strokeStyle = "#c33";
      g.beginPath();
      g.moveTo(p[0], -p[1]);
      g.lineTo(p[0] + 25 * d[0], -p[1] - 25 * d[1]);
      g.stroke();
    }
  });
}

function updateCloud() {
  if (pts.length === 0) { drawCloud(null); $("cloudout").textContent = ""; return; }
  const flat = new Float64Array(pts.flat());
  const r = call(() => cloud_bundle(flat, +$("theta").value, 200000, 1));
  drawCloud(r);
  const { sigma, ...rest } = r;
  show($("cloudout"), rest);
}

await init();
["mass", "theta", "contact", "theta0"].forEach(slider);

$("solve").onclick = () => {
  const obst = $("obst").value;
  const r = call(() => solve_profile(obst, +$("mass").value, 64, 2));
  drawProfile(obst, r);
  const { boundary, free_chain, ...rest } = r;
  show($("profout"), rest);
};
$("obst").onchange = () => drawProfile($("obst").value, {});
drawProfile("square", {});

$("cloud").onclick = (e) => {
  const b = e.target.getBoundingClientRect();
  pts.push([e.clientX - b.left, -(e.clientY - b.top)]);
  updateCloud();
};
$("theta").addEventListener("change", updateCloud);
$("clear").onclick = () => { pts.length = 0; updateCloud(); };

$("check").onclick = () => {
  show($("capout"), call(() => cap_check(+$("contact").value, +$("theta0").value, 16, 200000, 1)));
};
