import init, { bundledScenario, heatmap, oracleComparison, emissionProfile } from "./pkg/luxgrid_web.js";

const $ = (id) => document.getElementById(id);

function model() {
  return [$("json").value, $("emission").value, $("rho-policy").value, $("diffuse").value];
}

function guarded(fn) {
  return () => {
    $("error").textContent = "";
    try {
      fn();
    } catch (e) {
      $("error").textContent = String(e.message ?? e);
    }
  };
}

function loadScenario() {
  $("json").value = bundledScenario($("scenario").value);
}

function showHeatmap() {
  const out = JSON.parse(heatmap(...model()));
  $("heatmap").innerHTML = out.svg;
  const lines = [
    `average  ${out.average_lux.toFixed(2)} lx`,
    `min      ${out.min_lux.toFixed(2)} lx`,
    `max      ${out.max_lux.toFixed(2)} lx`,
    `rho_moy  ${out.rho_moy.toFixed(4)}`,
  ];
  if (out.note) lines.push("", out.note);
  for (const w of out.warnings) lines.push("warning: " + w);
  $("heatmap-stats").textContent = lines.join("\n");
}

function showOracle() {
  const n = Number($("subdivision").value);
  const t0 = performance.now();
  const out = JSON.parse(oracleComparison(...model(), n));
  const ms = performance.now() - t0;
  $("oracle").innerHTML = out.svg;
  $("oracle-stats").textContent = [
    `${out.patches} patches, ${out.iterations} iterations, ${ms.toFixed(0)} ms`,
    `energy imbalance ${out.energy_imbalance.toExponential(2)}`,
    `interreflected mean: radiosity ${out.oracle_mean_lux.toFixed(2)} lx`,
    `                     rho_moy   ${out.estimate_mean_lux.toFixed(2)} lx`,
    `ratio ${(out.estimate_mean_lux / out.oracle_mean_lux).toFixed(3)}`,
  ].join("\n");
  const rows = out.points
    .filter((p) => p.i === 4)
    .map((p) => `<tr><td>(${p.i};${p.j})</td><td>${p.oracle_lux.toFixed(2)}</td><td>${p.estimate_lux.toFixed(2)}</td></tr>`);
  $("oracle-table").innerHTML =
    "<tr><th>point</th><th>radiosity lx</th><th>rho_moy lx</th></tr>" + rows.join("");
}

function showProfile() {
  const out = JSON.parse(emissionProfile(Number($("height").value), Number($("peak").value), Number($("offset").value), 81));
  const w = 640, h = 300, pad = 45;
  const xmax = out.offsets_m[out.offsets_m.length - 1];
  const ymax = Math.max(...out.isotropic_lux);
  const px = (x) => pad + (x / xmax) * (w - 2 * pad);
  const py = (y) => h - pad - (y / ymax) * (h - 2 * pad);
  const path = (ys) => ys.map((y, k) => `${k ? "L" : "M"}${px(out.offsets_m[k]).toFixed(1)},${py(y).toFixed(1)}`).join("");
  const ticks = [0, 0.25, 0.5, 0.75, 1]
    .map((f) => `<text x="${pad - 6}" y="${py(f * ymax) + 4}" font-size="11" text-anchor="end">${(f * ymax).toFixed(0)}</text>`)
    .join("");
  const xticks = [0, 0.25, 0.5, 0.75, 1]
    .map((f) => `<text x="${px(f * xmax)}" y="${h - pad + 16}" font-size="11" text-anchor="middle">${(f * xmax).toFixed(1)}</text>`)
    .join("");
  $("profile").innerHTML = `
<svg xmlns="http://www.w3.org/2000/svg" width="${w}" height="${h}" font-family="sans-serif">
  <line x1="${pad}" y1="${h - pad}" x2="${w - pad}" y2="${h - pad}" stroke="#888"/>
  <line x1="${pad}" y1="${pad}" x2="${pad}" y2="${h - pad}" stroke="#888"/>
  ${ticks}${xticks}
  <text x="${w / 2}" y="${h - 8}" font-size="12" text-anchor="middle">offset from nadir (m)</text>
  <text x="12" y="${pad - 12}" font-size="12">lx</text>
  <path d="${path(out.isotropic_lux)}" fill="none" stroke="#d2691e" stroke-width="2"/>
  <path d="${path(out.lambertian_lux)}" fill="none" stroke="#1e3a8a" stroke-width="2"/>
  <text x="${w - pad}" y="${pad}" font-size="12" text-anchor="end" fill="#d2691e">isotropic</text>
  <text x="${w - pad}" y="${pad + 16}" font-size="12" text-anchor="end" fill="#1e3a8a">lambertian</text>
</svg>`;
}

await init();
$("scenario").addEventListener("change", guarded(() => { loadScenario(); showHeatmap(); }));
for (const id of ["emission", "rho-policy", "diffuse"]) $(id).addEventListener("change", guarded(showHeatmap));
$("run-heatmap").addEventListener("click", guarded(showHeatmap));
$("run-oracle").addEventListener("click", guarded(showOracle));
$("run-profile").addEventListener("click", guarded(showProfile));
loadScenario();
guarded(showHeatmap)();
guarded(showProfile)();
