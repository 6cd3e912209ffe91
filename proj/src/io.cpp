#include "jnr/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace jnr {

using Json = nlohmann::ordered_json;

WeightSpec ProblemFile::weight() const {
  if (weight_k) return make_weight(*weight_k, n);
  if (weight_c) return make_weight(*weight_c);
  throw BadWeight("problem file carries no weight");
}

namespace {

RMatrix parse_grid(const Json& grid, int n, const std::string& what) {
  if (!grid.is_array() || static_cast<int>(grid.size()) != n)
    throw ParseError(what + ": expected " + std::to_string(n) + " rows");
  RMatrix M(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& row = grid[i];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw ParseError(what + ": row " + std::to_string(i) + " does not have " +
                       std::to_string(n) + " entries");
    for (int j = 0; j < n; ++j) {
      if (!row[j].is_number())
        throw ParseError(what + ": row " + std::to_string(i) + " holds a non-number");
      M(i, j) = row[j].get<double>();
      if (!std::isfinite(M(i, j)))
        throw ParseError(what + ": row " + std::to_string(i) + " holds a non-finite entry");
    }
  }
  return M;
}

Json grid_json(const RMatrix& M) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json matrix_json(const CMatrix& M) {
  Json j;
  j["re"] = grid_json(M.real());
  j["im"] = grid_json(M.imag());
  return j;
}

Json vector_json(const RVector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Json params_json(const RunParams& rp) {
  Json j;
  j["dirs"] = rp.dirs;
  j["seed"] = rp.seed;
  j["tol"] = rp.tol;
  if (rp.k) j["k"] = *rp.k;
  if (!rp.mode.empty()) j["mode"] = rp.mode;
  j["cone_sv"] = rp.cone_sv;
  return j;
}

Json envelope(const std::string& command, const RunParams& rp) {
  Json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = command;
  j["params"] = params_json(rp);
  return j;
}

void append_number(std::string& out, double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  out += buf;
}

std::string csv_header_comment(const std::string& command, const RunParams& rp) {
  std::string out = "# ";
  out += kToolName;
  out += " ";
  out += kToolVersion;
  out += " command=" + command;
  out += " dirs=" + std::to_string(rp.dirs);
  out += " seed=" + std::to_string(rp.seed);
  out += " tol=";
  append_number(out, rp.tol);
  if (rp.k) out += " k=" + std::to_string(*rp.k);
  out += "\n";
  return out;
}

}  // namespace

ProblemFile parse_problem(const std::string& json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("top level must be an object");
  if (!doc.contains("n") || !doc["n"].is_number_integer())
    throw ParseError("missing integer field n");
  ProblemFile p;
  p.n = doc["n"].get<int>();
  if (p.n < 1) throw ParseError("n must be positive");
  if (p.n > 256) throw ParseError("n exceeds the supported cap of 256");
  if (!doc.contains("matrices") || !doc["matrices"].is_array() || doc["matrices"].empty())
    throw ParseError("missing non-empty array field matrices");

  std::vector<CMatrix> mats;
  int idx = 0;
  for (const auto& entry : doc["matrices"]) {
    const std::string name =
        entry.contains("name") ? entry["name"].get<std::string>() : "A" + std::to_string(idx + 1);
    if (!entry.contains("re")) throw ParseError(name + ": missing re grid");
    const RMatrix re = parse_grid(entry["re"], p.n, name + ".re");
    RMatrix im = RMatrix::Zero(p.n, p.n);
    if (entry.contains("im")) im = parse_grid(entry["im"], p.n, name + ".im");
    CMatrix M(p.n, p.n);
    M.real() = re;
    M.imag() = im;
    p.names.push_back(name);
    mats.push_back(std::move(M));
    ++idx;
  }
  p.tuple = MatrixTuple(std::move(mats));

  if (doc.contains("weight")) {
    const auto& w = doc["weight"];
    if (w.contains("k")) {
      p.weight_k = w["k"].get<int>();
    } else if (w.contains("c")) {
      const auto& arr = w["c"];
      if (!arr.is_array() || static_cast<int>(arr.size()) != p.n)
        throw ParseError("weight.c must hold n entries");
      RVector c(p.n);
      for (int i = 0; i < p.n; ++i) c[i] = arr[i].get<double>();
      p.weight_c = std::move(c);
    } else {
      throw ParseError("weight must hold k or c");
    }
  }
  if (doc.contains("block_sizes")) {
    for (const auto& b : doc["block_sizes"]) p.block_sizes.push_back(b.get<int>());
  }
  return p;
}

std::string serialize_problem(const ProblemFile& p) {
  Json doc;
  doc["n"] = p.n;
  Json mats = Json::array();
  for (int j = 0; j < p.tuple.size(); ++j) {
    Json m;
    m["name"] = j < static_cast<int>(p.names.size()) ? p.names[j] : "A" + std::to_string(j + 1);
    m["re"] = grid_json(p.tuple.A[j].real());
    m["im"] = grid_json(p.tuple.A[j].imag());
    mats.push_back(std::move(m));
  }
  doc["matrices"] = std::move(mats);
  if (p.weight_k) {
    doc["weight"] = Json{{"k", *p.weight_k}};
  } else if (p.weight_c) {
    doc["weight"] = Json{{"c", vector_json(*p.weight_c)}};
  }
  if (!p.block_sizes.empty()) doc["block_sizes"] = p.block_sizes;
  return doc.dump(2) + "\n";
}

std::vector<std::string> demo_names() { return {"ex3.1", "ex3.2", "ex5.2"}; }

ProblemFile demo_problem(const std::string& name) {
  const double s3h = std::sqrt(3.0) / 2.0;
  ProblemFile p;
  if (name == "ex3.1") {
    p.n = 5;
    CMatrix A = CMatrix::Zero(5, 5);
    A(0, 0) = Complex(1, 0);
    A(1, 1) = Complex(-0.5, s3h);
    A(2, 2) = Complex(-0.5, -s3h);
    A(3, 4) = Complex(0.1, 0);
    p.names = {"A"};
    p.tuple = MatrixTuple({A});
    p.weight_k = 1;
    p.block_sizes = {3, 2};
    return p;
  }
  if (name == "ex3.2") {
    p.n = 6;
    CMatrix A = CMatrix::Zero(6, 6);
    A(0, 0) = Complex(1, 1);
    A(1, 1) = Complex(1, -1);
    A(2, 2) = Complex(-1, 1);
    A(3, 3) = Complex(-1, -1);
    A(4, 4) = Complex(1, 0);
    A(4, 5) = Complex(1, 0);
    A(5, 4) = Complex(-1, 0);
    A(5, 5) = Complex(-1, 0);
    p.names = {"A"};
    p.tuple = MatrixTuple({A});
    p.weight_k = 1;
    p.block_sizes = {4, 2};
    return p;
  }
  if (name == "ex5.2") {
    p.n = 6;
    CMatrix A1 = CMatrix::Zero(6, 6);
    const double d1[] = {1, 1, -1, -1, 1, -1};
    for (int i = 0; i < 6; ++i) A1(i, i) = d1[i];
    CMatrix A2 = CMatrix::Zero(6, 6);
    const double d2[] = {1, -1, 1, -1};
    for (int i = 0; i < 4; ++i) A2(i, i) = d2[i];
    A2(4, 5) = Complex(0, 1);
    A2(5, 4) = Complex(0, -1);
    CMatrix A3 = CMatrix::Zero(6, 6);
    A3(0, 0) = 1;
    A3(1, 2) = Complex(0, 1);
    A3(2, 1) = Complex(0, -1);
    A3(3, 3) = 1;
    A3(4, 4) = -1;
    A3(5, 5) = -1;
    p.names = {"A1", "A2", "A3"};
    p.tuple = MatrixTuple({A1, A2, A3});
    p.weight_k = 1;
    return p;
  }
  std::string valid;
  for (const auto& d : demo_names()) valid += (valid.empty() ? "" : ", ") + d;
  throw UnknownDemo("unknown demo '" + name + "'; valid names: " + valid);
}

std::string support_report_json(const ProblemFile& p, const MatrixTuple& herm,
                                const WeightSpec& C, const std::vector<SupportProbe>& probes,
                                const RunParams& rp) {
  Json doc = envelope("support", rp);
  doc["n"] = herm.dim();
  doc["m"] = herm.size();
  doc["weight_c"] = vector_json(C.c);
  doc["gamma"] = C.gamma;
  doc["scale"] = tuple_scale(herm, C);
  Json recs = Json::array();
  for (const auto& probe : probes) {
    Json r;
    r["v"] = vector_json(probe.v);
    r["h"] = probe.h;
    r["point"] = vector_json(probe.point);
    Json gaps = Json::array();
    for (double g : probe.gaps) gaps.push_back(g);
    r["gaps"] = std::move(gaps);
    r["degenerate"] = probe.degenerate;
    recs.push_back(std::move(r));
  }
  doc["records"] = std::move(recs);
  (void)p;
  return doc.dump(2) + "\n";
}

std::string support_report_csv(const std::vector<SupportProbe>& probes, const RunParams& rp) {
  std::string out = csv_header_comment("support", rp);
  if (probes.empty()) return out;
  const int m = static_cast<int>(probes.front().v.size());
  for (int j = 1; j <= m; ++j) out += "v" + std::to_string(j) + ",";
  out += "h";
  for (int j = 1; j <= m; ++j) out += ",p" + std::to_string(j);
  out += ",min_gap,degenerate\n";
  for (const auto& probe : probes) {
    for (int j = 0; j < m; ++j) {
      append_number(out, probe.v[j]);
      out += ",";
    }
    append_number(out, probe.h);
    for (int j = 0; j < m; ++j) {
      out += ",";
      append_number(out, probe.point[j]);
    }
    out += ",";
    double mg = probe.gaps.empty() ? 0.0 : *std::min_element(probe.gaps.begin(), probe.gaps.end());
    append_number(out, mg);
    out += probe.degenerate ? ",1\n" : ",0\n";
  }
  return out;
}

std::string boundary_report_csv(const Boundary2D& b, const std::vector<Eigen::Vector2d>& hull,
                                const RunParams& rp) {
  std::string out = csv_header_comment("boundary", rp);
  out += "theta,vx,vy,h,px,py\n";
  for (std::size_t i = 0; i < b.thetas.size(); ++i) {
    append_number(out, b.thetas[i]);
    out += ",";
    append_number(out, b.outer[i].v[0]);
    out += ",";
    append_number(out, b.outer[i].v[1]);
    out += ",";
    append_number(out, b.outer[i].h);
    out += ",";
    append_number(out, b.inner[i].x());
    out += ",";
    append_number(out, b.inner[i].y());
    out += "\n";
  }
  out += "# hull_vertices\n";
  out += "index,px,py\n";
  for (std::size_t i = 0; i < hull.size(); ++i) {
    out += std::to_string(i) + ",";
    append_number(out, hull[i].x());
    out += ",";
    append_number(out, hull[i].y());
    out += "\n";
  }
  return out;
}

std::string boundary_report_json(const Boundary2D& b, const std::vector<Eigen::Vector2d>& hull,
                                 const RunParams& rp) {
  Json doc = envelope("boundary", rp);
  Json recs = Json::array();
  for (std::size_t i = 0; i < b.thetas.size(); ++i) {
    Json r;
    r["theta"] = b.thetas[i];
    r["v"] = Json::array({b.outer[i].v[0], b.outer[i].v[1]});
    r["h"] = b.outer[i].h;
    r["point"] = Json::array({b.inner[i].x(), b.inner[i].y()});
    recs.push_back(std::move(r));
  }
  doc["records"] = std::move(recs);
  Json hv = Json::array();
  for (const auto& p : hull) hv.push_back(Json::array({p.x(), p.y()}));
  doc["hull_vertices"] = std::move(hv);
  return doc.dump(2) + "\n";
}

std::string analysis_report_json(const AnalysisReport& rep, const RunParams& rp) {
  Json doc = envelope("decide", rp);
  doc["verdict"] = to_string(rep.verdict);
  doc["route"] = to_string(rep.route);
  doc["n"] = rep.n;
  doc["m"] = rep.m;
  doc["gamma"] = rep.gamma;
  doc["k_used"] = rep.k_used;
  if (rep.ell >= 0) doc["ell"] = rep.ell;
  doc["tolerances"] = Json{{"tol", rep.tol}, {"cone_sv", rep.cone_sv}};
  doc["dirs"] = rep.n_dirs;
  doc["seed"] = rep.seed;
  if (!rep.note.empty()) doc["note"] = rep.note;
  // Geometric statements always concern the convex hull of the range.
  doc["convention"] = "all geometric judgments refer to the convex hull of the range";

  Json cert;
  if (rep.unitary) cert["unitary"] = matrix_json(*rep.unitary);
  if (!rep.block_diag.empty()) {
    Json d = Json::array();
    for (const auto& col : rep.block_diag) d.push_back(vector_json(col));
    cert["block_diag"] = std::move(d);
  }
  if (rep.witness_direction) {
    cert["witness_direction"] = vector_json(*rep.witness_direction);
    cert["witness_gap"] = rep.witness_gap;
  }
  if (rep.offending_pair) {
    cert["offending_pair"] = Json::array({rep.offending_pair->first, rep.offending_pair->second});
    cert["offending_residual"] = rep.offending_residual;
  }
  if (!rep.conical.empty()) {
    Json arr = Json::array();
    for (const auto& c : rep.conical) {
      Json cj;
      cj["point"] = vector_json(c.point);
      cj["cone_rank"] = c.cone_rank;
      cj["direction_count"] = static_cast<int>(c.directions.size());
      arr.push_back(std::move(cj));
    }
    cert["conical_points"] = std::move(arr);
  }
  if (rep.c_hat.size() > 0) {
    cert["c_shift"] = rep.c_shift;
    cert["c_hat"] = vector_json(rep.c_hat);
    if (!rep.c_hat_supports.empty()) {
      cert["c_hat_discrepancy"] = rep.c_hat_discrepancy;
      Json rows = Json::array();
      for (const auto& row : rep.c_hat_supports) {
        rows.push_back(Json{{"v", vector_json(row.v)},
                            {"h_shifted", row.h_shifted},
                            {"h_hat", row.h_hat}});
      }
      cert["c_hat_supports"] = std::move(rows);
    }
  }
  doc["certificate"] = std::move(cert);
  return doc.dump(2) + "\n";
}

std::string analysis_report_csv(const AnalysisReport& rep, const RunParams& rp) {
  std::string out = csv_header_comment("decide", rp);
  out += "verdict,route,n,m,gamma,k_used,ell,witness_gap,offending_residual\n";
  out += to_string(rep.verdict);
  out += ",";
  out += to_string(rep.route);
  out += "," + std::to_string(rep.n) + "," + std::to_string(rep.m) + "," +
         std::to_string(rep.gamma) + "," + std::to_string(rep.k_used) + "," +
         std::to_string(rep.ell) + ",";
  append_number(out, rep.witness_gap);
  out += ",";
  append_number(out, rep.offending_residual);
  out += "\n";
  return out;
}

std::string pinch_report_json(const PinchDecomposition& pd, const std::vector<int>& splits,
                              double residual, const RunParams& rp) {
  Json doc = envelope("pinch", rp);
  doc["rank"] = pd.rank;
  doc["splits"] = splits;
  Json w = Json::array();
  for (double x : pd.weights) w.push_back(x);
  doc["weights"] = std::move(w);
  doc["reconstruction_residual"] = residual;
  doc["source"] = matrix_json(pd.source);
  Json projs = Json::array();
  for (const auto& Q : pd.projections) projs.push_back(matrix_json(Q));
  doc["projections"] = std::move(projs);
  return doc.dump(2) + "\n";
}

void write_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << text;
  }
  fs::rename(tmp, target);
}

}  // namespace jnr
