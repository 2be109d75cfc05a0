import init, { griffiths_table, biorth_gram, relation_check } from "./pkg/lambda_griffiths_web.js";

const $ = (id) => document.getElementById(id);
const status = $("status");
const heat = $("heat");
const readout = $("readout");
const details = $("details");
let shown = null;

function inputs() {
  return [$("p1").value, $("p2").value, $("p3").value, $("lambda").value, Number($("n").value)];
}

function run(f) {
  status.className = "";
  status.textContent = "";
  details.textContent = "";
  readout.textContent = "";
  try {
    f();
  } catch (e) {
    status.className = "bad";
    status.textContent = String(e.message ?? e);
    heat.hidden = true;
  }
}

// Signed log scale, blue for negative, red for positive.
function colour(v, scale) {
  const t = scale === 0 ? 0 : Math.log1p(Math.abs(v)) / scale;
  const c = Math.round(255 * (1 - t));
  return v < 0 ? [c, c, 255] : [255, c, c];
}

function draw(data, title) {
  const n = data.approx.length;
  heat.width = n;
  heat.height = n;
  const ctx = heat.getContext("2d");
  const img = ctx.createImageData(n, n);
  const scale = Math.max(...data.approx.flat().map((v) => Math.log1p(Math.abs(v))));
  data.approx.forEach((row, r) =>
    row.forEach((v, c) => {
      const [R, G, B] = colour(v, scale);
      img.data.set([R, G, B, 255], 4 * (r * n + c));
    }),
  );
  ctx.putImageData(img, 0, 0);
  heat.hidden = false;
  shown = { data, title };
}

heat.addEventListener("mousemove", (ev) => {
  if (!shown) return;
  const n = shown.data.approx.length;
  const rect = heat.getBoundingClientRect();
  const c = Math.floor(((ev.clientX - rect.left) / rect.width) * n);
  const r = Math.floor(((ev.clientY - rect.top) / rect.height) * n);
  if (r < 0 || c < 0 || r >= n || c >= n) return;
  const [a, b] = shown.data.points[r];
  const [x, y] = shown.data.points[c];
  readout.textContent = `${shown.title}[(${a},${b}), (${x},${y})] = ${shown.data.exact[r][c]}`;
});

$("table").onclick = () =>
  run(() => {
    const tilde = $("tilde").checked;
    const data = JSON.parse(griffiths_table(...inputs(), tilde));
    draw(data, tilde ? "G~" : "G");
    status.textContent = "rows are degrees (i, j), columns are points (x, y); hover for exact values";
  });

$("gram").onclick = () =>
  run(() => {
    const data = JSON.parse(biorth_gram(...inputs(), $("weight").value));
    draw(data, "Gram");
    status.className = data.diagonal ? "ok" : "bad";
    status.textContent = data.diagonal
      ? `diagonal against partner λ' = ${data.partner_lambda}`
      : `not diagonal: entry (${data.first_off_diagonal.row}, ${data.first_off_diagonal.col}) = ${data.first_off_diagonal.value}`;
    const diag = data.exact.map((row, k) => `(${data.points[k]}): ${row[k]}`);
    const pre = document.createElement("pre");
    pre.textContent = "diagonal\n" + diag.join("\n");
    details.append(pre);
  });

$("relations").onclick = () =>
  run(() => {
    heat.hidden = true;
    shown = null;
    const data = JSON.parse(relation_check(...inputs()));
    const tbl = document.createElement("table");
    tbl.innerHTML = "<tr><th>relation</th><th>entries</th><th>result</th></tr>";
    for (const r of data.relations) {
      const tr = tbl.insertRow();
      tr.insertCell().textContent = r.relation;
      tr.insertCell().textContent = r.checked;
      const cell = tr.insertCell();
      cell.className = r.exact_zero ? "ok" : "bad";
      cell.textContent = r.exact_zero ? "every residual is exactly 0" : JSON.stringify(r.nonzero);
    }
    details.append(tbl);
  });

await init();
status.textContent = "ready";
