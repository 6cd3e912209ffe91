#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "jnr/decide.hpp"
#include "jnr/io.hpp"

namespace {

using namespace jnr;

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    write_atomic(out_path, text);
}

struct CommonOpts {
  std::string file;
  std::string out;
  std::string format = "json";
  int dirs = 720;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  std::optional<int> k;
  std::vector<double> c;
  double cone_sv = 0.05;
};

WeightSpec resolve_weight(const ProblemFile& p, const CommonOpts& opt) {
  if (opt.k) return make_weight(*opt.k, p.n);
  if (!opt.c.empty()) {
    if (static_cast<int>(opt.c.size()) != p.n)
      throw BadWeight("--c must hold exactly n entries");
    RVector c(p.n);
    for (int i = 0; i < p.n; ++i) c[i] = opt.c[i];
    return make_weight(std::move(c));
  }
  return p.weight();
}

RunParams run_params(const CommonOpts& opt, const std::string& mode = {}) {
  RunParams rp;
  rp.dirs = opt.dirs;
  rp.seed = opt.seed;
  rp.tol = opt.tol;
  rp.k = opt.k;
  rp.mode = mode;
  rp.cone_sv = opt.cone_sv;
  return rp;
}

int cmd_support(const CommonOpts& opt) {
  const ProblemFile p = parse_problem(read_input(opt.file));
  const MatrixTuple herm = effective_hermitian(p.tuple);
  const WeightSpec C = resolve_weight(p, opt);
  const auto dirs = sample_directions(herm.size(), opt.dirs, opt.seed);
  std::vector<SupportProbe> probes;
  probes.reserve(dirs.size());
  for (const auto& v : dirs) probes.push_back(support(herm, C, v));
  if (opt.format == "csv")
    emit(support_report_csv(probes, run_params(opt)), opt.out);
  else if (opt.format == "json")
    emit(support_report_json(p, herm, C, probes, run_params(opt)), opt.out);
  else
    throw UnknownFormat("support: format must be json or csv");
  return 0;
}

int cmd_boundary(const CommonOpts& opt) {
  const ProblemFile p = parse_problem(read_input(opt.file));
  const auto H = hermitian_expand(p.tuple);
  CMatrix X, Y;
  if (p.tuple.size() == 1) {
    X = H[0];
    Y = H[1];
  } else if (p.tuple.size() == 2 && p.tuple.all_hermitian()) {
    X = H[0];
    Y = H[2];
  } else {
    throw WrongArity(
        "boundary needs exactly two effective real coordinates "
        "(one complex matrix or two Hermitian matrices)");
  }
  const WeightSpec C = resolve_weight(p, opt);
  const auto b = boundary2d(X, Y, C, opt.dirs);
  const auto hull = convex_hull_2d(b.inner);
  if (opt.format == "csv")
    emit(boundary_report_csv(b, hull, run_params(opt)), opt.out);
  else if (opt.format == "json")
    emit(boundary_report_json(b, hull, run_params(opt)), opt.out);
  else
    throw UnknownFormat("boundary: format must be json or csv");
  return 0;
}

int cmd_decide(const CommonOpts& opt, const std::string& mode) {
  const ProblemFile p = parse_problem(read_input(opt.file));
  DecisionParams dp;
  dp.n_dirs = opt.dirs;
  dp.seed = opt.seed;
  dp.tol = opt.tol;
  dp.k = opt.k;
  dp.cone_sv = opt.cone_sv;

  AnalysisReport rep;
  if (mode == "polyhedral") {
    rep = decide_polyhedral(p.tuple, resolve_weight(p, opt), dp);
  } else if (mode == "commute") {
    rep = decide_commuting(p.tuple.A, CommuteMode::both, dp);
  } else if (mode == "conical") {
    rep = decide_via_conical(p.tuple, resolve_weight(p, opt), dp);
  } else {
    throw Error("decide: mode must be polyhedral, commute, or conical");
  }
  if (opt.format == "csv")
    emit(analysis_report_csv(rep, run_params(opt, mode)), opt.out);
  else if (opt.format == "json")
    emit(analysis_report_json(rep, run_params(opt, mode)), opt.out);
  else
    throw UnknownFormat("decide: format must be json or csv");
  return rep.verdict == Verdict::Inconclusive ? 2 : 0;
}

int cmd_demo(const std::string& name, const std::string& out) {
  emit(serialize_problem(demo_problem(name)), out);
  return 0;
}

int cmd_pinch(const CommonOpts& opt, const std::vector<int>& split_flag) {
  const ProblemFile p = parse_problem(read_input(opt.file));
  std::vector<int> splits = split_flag.empty() ? p.block_sizes : split_flag;
  if (splits.empty())
    throw BadBlockSpec("pinch needs --split or block_sizes in the problem file");
  const CMatrix& P = p.tuple.A[0];
  const auto pd = pinch_decompose(P, splits);
  CMatrix combo = CMatrix::Zero(P.rows(), P.cols());
  for (std::size_t i = 0; i < pd.weights.size(); ++i)
    combo += pd.weights[i] * pd.projections[i];
  const double residual = (combo - pd.source).norm();
  emit(pinch_report_json(pd, splits, residual, run_params(opt, "pinch")), opt.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"joint numerical range toolkit"};
  app.require_subcommand(1);

  CommonOpts opt;
  std::string demo_name;
  std::string mode;
  std::vector<int> split_flag;

  auto add_common = [&](CLI::App* cmd, bool with_dirs = true) {
    cmd->add_option("file", opt.file, "problem file (JSON), or - for stdin")->required();
    cmd->add_option("--out", opt.out, "output path (stdout when absent)");
    cmd->add_option("--format", opt.format, "json or csv");
    if (with_dirs)
      cmd->add_option("--dirs", opt.dirs, "number of directions")
          ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opt.seed, "64-bit seed");
    cmd->add_option("--tol", opt.tol, "relative tolerance");
    cmd->add_option("--k", [&opt](const CLI::results_t& res) {
      int v{};
      if (!CLI::detail::lexical_cast(res[0], v)) return false;
      opt.k = v;
      return true;
    }, "k-range weight override");
    cmd->add_option("--c", opt.c, "general weight entries")->delimiter(',');
    cmd->add_option("--cone-sv", opt.cone_sv, "conical acceptance threshold");
  };

  auto* support_cmd = app.add_subcommand("support", "support values over sampled directions");
  add_common(support_cmd);

  auto* boundary_cmd = app.add_subcommand("boundary", "planar boundary scan");
  add_common(boundary_cmd);

  auto* decide_cmd = app.add_subcommand("decide", "polyhedrality and commutativity verdicts");
  add_common(decide_cmd);
  decide_cmd->add_option("--mode", mode, "polyhedral, commute, or conical")->required();

  auto* demo_cmd = app.add_subcommand("demo", "emit a built-in example problem");
  demo_cmd->add_option("name", demo_name, "ex3.1, ex3.2, or ex5.2")->required();
  demo_cmd->add_option("--out", opt.out, "output path (stdout when absent)");

  auto* pinch_cmd = app.add_subcommand("pinch", "pinching decomposition of a projection");
  add_common(pinch_cmd, false);
  pinch_cmd->add_option("--split", split_flag, "block sizes n1,n2,...")->delimiter(',');

  // Subcommand-specific default: support/decide emit JSON.
  support_cmd->preparse_callback([&](std::size_t) { opt.format = "json"; });
  decide_cmd->preparse_callback([&](std::size_t) { opt.format = "json"; });
  pinch_cmd->preparse_callback([&](std::size_t) { opt.format = "json"; });
  boundary_cmd->preparse_callback([&](std::size_t) { opt.format = "csv"; });

  try {
    app.parse(argc, argv);
    if (support_cmd->parsed()) return cmd_support(opt);
    if (boundary_cmd->parsed()) return cmd_boundary(opt);
    if (decide_cmd->parsed()) return cmd_decide(opt, mode);
    if (demo_cmd->parsed()) return cmd_demo(demo_name, opt.out);
    if (pinch_cmd->parsed()) return cmd_pinch(opt, split_flag);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage problems exit 1, help exits 0
  } catch (const jnr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
