#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "tsf/coding.hpp"
#include "tsf/distortion.hpp"
#include "tsf/io.hpp"
#include "tsf/measures.hpp"
#include "tsf/norms.hpp"
#include "tsf/params.hpp"
#include "tsf/schreier.hpp"
#include "tsf/trees.hpp"
#include "tsf/verify.hpp"

using namespace tsf;
using io::json;

namespace {

// Run manifest: every report carries the command, input digests, parameters and seed.
struct Manifest {
  std::string command;
  json inputs = json::array();
  json params = nullptr;
  std::optional<Mode> mode;
  std::optional<std::uint64_t> seed;
  json outputs = json::array();

  json encode() const {
    json j{{"command", command}, {"inputs", inputs}, {"params", params}, {"outputs", outputs}};
    j["mode"] = mode ? json(std::string(to_string(*mode))) : json(nullptr);
    j["seed"] = seed ? json(*seed) : json(nullptr);
    return j;
  }
};

Manifest manifest;

json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Input, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  manifest.inputs.push_back({{"path", path}, {"sha256", sha256_hex(text)}});
  return io::parse(text, path);
}

ParamSystem read_params(const std::string& path) {
  ParamSystem sys = io::decode_params(read_json(path), "params");
  manifest.params = io::encode(sys);
  manifest.mode = sys.mode();
  return sys;
}

FinSet parse_set(const std::string& text) {
  std::vector<Index> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorKind::Input, "--set: '" + item + "' is not an integer");
    }
  }
  return FinSet(std::move(out));
}

void emit(const json& result, const std::string& out_path) {
  if (!out_path.empty()) manifest.outputs.push_back(out_path);
  json report{{"manifest", manifest.encode()}, {"result", result}};
  if (manifest.mode == Mode::Relaxed) report["stamp"] = "relaxed";
  const std::string text = io::canonical(report) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out || !(out << text)) fail(ErrorKind::Input, "cannot write " + out_path);
}

void write_side(const std::string& path, const json& j) {
  if (path.empty()) return;
  manifest.outputs.push_back(path);
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << io::canonical(j) << "\n")) fail(ErrorKind::Input, "cannot write " + path);
}

std::string join_argv(int argc, char** argv) {
  std::string s;
  for (int i = 1; i < argc; ++i) s += (i > 1 ? " " : "") + std::string(argv[i]);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Schreier-family, mixed Tsirelson norm and coding toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out;
  app.add_option("--out", out, "Write the JSON report here instead of stdout");

  int exit_status = 0;
  std::function<void()> action;

  // schreier ----------------------------------------------------------------
  auto* sch = app.add_subcommand("schreier", "Schreier families S_ξ");
  sch->require_subcommand(1);
  int xi = 0, r = 1;
  std::string set_text, family_path;
  auto* sch_member = sch->add_subcommand("member", "Is the set in S_ξ? (exit 0 yes, 1 no)");
  sch_member->add_option("--xi", xi)->required();
  sch_member->add_option("--set", set_text)->required();
  sch_member->callback([&] {
    action = [&] {
      const bool ok = schreier::is_member(parse_set(set_text), schreier::checked_order(xi));
      emit({{"member", ok}}, out);
      exit_status = ok ? 0 : 1;
    };
  });
  auto* sch_max = sch->add_subcommand("maximal", "Is the set a maximal member of S_ξ? (exit 0 yes, 1 no)");
  sch_max->add_option("--xi", xi)->required();
  sch_max->add_option("--set", set_text)->required();
  sch_max->callback([&] {
    action = [&] {
      const bool ok = schreier::is_maximal_member(parse_set(set_text), schreier::checked_order(xi));
      emit({{"maximal", ok}}, out);
      exit_status = ok ? 0 : 1;
    };
  });
  auto* sch_dec = sch->add_subcommand("decompose", "Greedy S_{ξ-1} decomposition");
  sch_dec->add_option("--xi", xi)->required();
  sch_dec->add_option("--set", set_text)->required();
  sch_dec->callback([&] {
    action = [&] {
      const auto d = schreier::greedy_decompose(parse_set(set_text), xi);
      emit(io::encode(d), out);
      exit_status = d.ok() ? 0 : 1;
    };
  });
  auto* sch_adm = sch->add_subcommand("admissible", "Is the family rS_ξ-admissible? (exit 0 yes, 1 no)");
  sch_adm->add_option("--xi", xi)->required();
  sch_adm->add_option("--r", r)->capture_default_str();
  sch_adm->add_option("--family", family_path)->required();
  sch_adm->callback([&] {
    action = [&] {
      const SetFamily fam = io::decode_family(read_json(family_path));
      const bool ok = schreier::is_admissible(fam, r, xi);
      emit({{"admissible", ok}}, out);
      exit_status = ok ? 0 : 1;
    };
  });

  // measure -----------------------------------------------------------------
  auto* mea = app.add_subcommand("measure", "Repeated averages and ‖·‖_ξ on measures");
  mea->require_subcommand(1);
  std::string ground_path, measure_path;
  std::size_t n = 1;
  auto* mea_avg = mea->add_subcommand("avg", "Repeated average ξ_n^M");
  mea_avg->add_option("--xi", xi)->required();
  mea_avg->add_option("--ground", ground_path)->required();
  mea_avg->add_option("--n", n)->capture_default_str();
  mea_avg->callback([&] {
    action = [&] {
      const Measure mu = repeated_average(xi, io::decode_ground(read_json(ground_path)), n);
      emit({{"measure", io::encode(mu)}, {"support", io::encode(mu.support())}}, out);
    };
  });
  auto* mea_norm = mea->add_subcommand("snorm", "‖μ‖_ξ = sup over F ∈ S_ξ of μ(F)");
  mea_norm->add_option("--xi", xi)->required();
  mea_norm->add_option("--measure", measure_path)->required();
  mea_norm->callback([&] {
    action = [&] {
      const auto v = schreier_value(io::decode_measure(read_json(measure_path)), xi);
      emit({{"value", io::encode(v.value)}, {"witness", io::encode(v.witness)}}, out);
    };
  });

  // params ------------------------------------------------------------------
  auto* par = app.add_subcommand("params", "Parameter systems (M, L, N)");
  par->require_subcommand(1);
  std::string params_path, pool_path;
  std::size_t j = 1, length = 1;
  auto* par_val = par->add_subcommand("validate", "Check the strict and relaxed constraints");
  par_val->add_option("--params", params_path)->required();
  par_val->callback([&] {
    action = [&] {
      const json pj = read_json(params_path);
      if (!pj.is_object() || !pj.contains("M")) fail(ErrorKind::Input, "field 'params': expected an object with M");
      const GroundSet m = io::decode_ground(pj["M"], "params.M");
      const GroundSet l = pj.contains("L") ? io::decode_ground(pj["L"], "params.L") : GroundSet();
      const SystemReport rep = validate_system(m, l);
      const bool strict = !pj.contains("mode") || pj["mode"] == "strict";
      manifest.mode = strict ? Mode::Strict : Mode::Relaxed;
      emit(io::encode(rep), out);
      exit_status = (strict ? rep.strict_valid : rep.relaxed_valid) ? 0 : 1;
    };
  });
  auto* par_f = par->add_subcommand("f", "f_j = max Σ ρ_i n_i subject to Π m_i^{ρ_i} < m_j³");
  par_f->add_option("--params", params_path)->required();
  par_f->add_option("--j", j)->required();
  par_f->callback([&] {
    action = [&] {
      const ParamSystem sys = read_params(params_path);
      emit({{"j", j}, {"f", sys.f(j)}}, out);
    };
  });
  auto* par_good = par->add_subcommand("good", "Check l_j (f_j + 1) < n_j for j ≤ J (exit 0 yes, 1 no)");
  par_good->add_option("--params", params_path)->required();
  par_good->add_option("--j", j)->required();
  par_good->callback([&] {
    action = [&] {
      const GoodReport rep = is_good(read_params(params_path), j);
      emit(io::encode(rep), out);
      exit_status = rep.pass ? 0 : 1;
    };
  });
  auto* par_make = par->add_subcommand("makegood", "Choose an M-good N from a pool P");
  par_make->add_option("--params", params_path, "Supplies M and L")->required();
  par_make->add_option("--pool", pool_path, "Ground set P")->required();
  par_make->add_option("--length", length)->required();
  par_make->callback([&] {
    action = [&] {
      const json pj = read_json(params_path);
      if (!pj.is_object() || !pj.contains("M") || !pj.contains("L"))
        fail(ErrorKind::Input, "field 'params': expected an object with M and L");
      const GroundSet m = io::decode_ground(pj["M"], "params.M");
      const GroundSet l = io::decode_ground(pj["L"], "params.L");
      const GroundSet nn = make_good(m, l, io::decode_ground(read_json(pool_path), "pool"), length);
      emit({{"N", io::encode(nn)}}, out);
    };
  });

  // tree --------------------------------------------------------------------
  auto* tre = app.add_subcommand("tree", "Appropriate trees");
  tre->require_subcommand(1);
  std::string tree_path;
  auto* tre_val = tre->add_subcommand("validate", "List violations (exit 0 valid, 1 invalid)");
  tre_val->add_option("--tree", tree_path)->required();
  tre_val->add_option("--params", params_path)->required();
  tre_val->callback([&] {
    action = [&] {
      const ParamSystem sys = read_params(params_path);
      const auto v = tree_violations(io::decode_tree(read_json(tree_path)), sys);
      emit({{"valid", v.empty()}, {"violations", v}}, out);
      exit_status = v.empty() ? 0 : 1;
    };
  });
  auto* tre_mu = tre->add_subcommand("mu", "The functional μ_T");
  tre_mu->add_option("--tree", tree_path)->required();
  tre_mu->add_option("--params", params_path)->required();
  tre_mu->callback([&] {
    action = [&] {
      const ParamSystem sys = read_params(params_path);
      const ApTree t = io::decode_tree(read_json(tree_path));
      validate(t, sys);
      emit({{"measure", io::encode(mu_of(t))}, {"weight", weight(t)}, {"depth", depth(t)}}, out);
    };
  });
  auto* tre_dec = tre->add_subcommand("decompose", "Split μ_T against m_j (requires w(T) < m_j)");
  tre_dec->add_option("--tree", tree_path)->required();
  tre_dec->add_option("--params", params_path)->required();
  tre_dec->add_option("--j", j)->required();
  tre_dec->callback([&] {
    action = [&] {
      const ParamSystem sys = read_params(params_path);
      emit(io::encode(decompose(io::decode_tree(read_json(tree_path)), j, sys)), out);
    };
  });

  // norm --------------------------------------------------------------------
  auto* nrm = app.add_subcommand("norm", "Norms with certificates");
  nrm->require_subcommand(1);
  std::string vector_path, witness_path;
  std::size_t depth_max = 4;
  auto* nrm_mixed = nrm->add_subcommand("mixed", "Mixed Tsirelson norm by interval DP");
  nrm_mixed->add_option("--vector", vector_path)->required();
  nrm_mixed->add_option("--params", params_path)->required();
  nrm_mixed->add_option("--witness", witness_path, "Also write the witness tree here");
  nrm_mixed->callback([&] {
    action = [&] {
      const ParamSystem sys = read_params(params_path);
      const Vector x = io::decode_vector(read_json(vector_path));
      const NormCertificate c = mixed_norm(x, sys);
      if (!check_mixed(x, sys, c)) fail(ErrorKind::Internal, "witness does not re-evaluate to the norm");
      const json cj = io::encode(c);
      if (!witness_path.empty()) write_side(witness_path, cj["witness"]);
      emit(cj, out);
    };
  });
  auto* nrm_sch = nrm->add_subcommand("schreier", "‖x‖_ξ");
  nrm_sch->add_option("--vector", vector_path)->required();
  nrm_sch->add_option("--xi", xi)->required();
  nrm_sch->callback([&] {
    action = [&] { emit(io::encode(schreier_norm(io::decode_vector(read_json(vector_path)), xi)), out); };
  });
  auto* nrm_cond = nrm->add_subcommand("cond", "‖x‖_{Cξ} over successive intervals");
  nrm_cond->add_option("--vector", vector_path)->required();
  nrm_cond->add_option("--xi", xi)->required();
  nrm_cond->callback([&] {
    action = [&] { emit(io::encode(cond_schreier_norm(io::decode_vector(read_json(vector_path)), xi)), out); };
  });
  auto* nrm_oracle = nrm->add_subcommand("oracle", "Maximum over enumerated trees (support ≤ 8)");
  nrm_oracle->add_option("--vector", vector_path)->required();
  nrm_oracle->add_option("--params", params_path)->required();
  nrm_oracle->add_option("--depth", depth_max)->capture_default_str();
  nrm_oracle->callback([&] {
    action = [&] {
      const ParamSystem sys = read_params(params_path);
      const Vector x = io::decode_vector(read_json(vector_path));
      emit({{"value", io::encode(oracle_norm(x, sys, depth_max))}, {"depth", depth_max}}, out);
    };
  });

  // avg ---------------------------------------------------------------------
  auto* avg = app.add_subcommand("avg", "Averages of block sequences");
  avg->require_subcommand(1);
  std::string blocks_path, eps_text;
  std::optional<std::size_t> rounds;
  bool normalize = false;
  auto load_blocks = [&](const ParamSystem* sys) {
    auto raw = io::decode_blocks(read_json(blocks_path));
    return normalize && sys ? BlockBasis::normalize(std::move(raw), *sys) : BlockBasis(std::move(raw));
  };
  auto* avg_gen = avg->add_subcommand("generic", "(ε, ξ) average over a ground chosen from the block minima");
  avg_gen->add_option("--blocks", blocks_path)->required();
  avg_gen->add_option("--eps", eps_text)->required();
  avg_gen->add_option("--xi", xi)->required();
  avg_gen->add_option("--ground", ground_path, "Ground R (default: least admissible tail of the minima)");
  avg_gen->add_option("--params", params_path, "Also report the mixed norm");
  avg_gen->add_flag("--normalize", normalize, "Scale blocks to norm 1 (needs --params)");
  avg_gen->callback([&] {
    action = [&] {
      std::optional<ParamSystem> sys;
      if (!params_path.empty()) sys = read_params(params_path);
      const BlockBasis blocks = load_blocks(sys ? &*sys : nullptr);
      const Rational eps = parse_rational(eps_text);
      const GroundSet g =
          ground_path.empty() ? select_ground(blocks, eps, xi) : io::decode_ground(read_json(ground_path));
      emit(io::encode(generic_average(blocks, eps, xi, g, sys ? &*sys : nullptr)), out);
    };
  });
  auto* avg_smooth = avg->add_subcommand("smooth", "Search for an average of norm ≥ 1/2");
  avg_smooth->add_option("--blocks", blocks_path)->required();
  avg_smooth->add_option("--params", params_path)->required();
  avg_smooth->add_option("--eps", eps_text)->required();
  avg_smooth->add_option("--j", j)->required();
  avg_smooth->add_option("--rounds", rounds, "Round limit (default l_j)");
  avg_smooth->add_flag("--normalize", normalize, "Scale blocks to norm 1 first");
  avg_smooth->callback([&] {
    action = [&] {
      const ParamSystem sys = read_params(params_path);
      const BlockBasis blocks = load_blocks(&sys);
      try {
        const SmoothAverage s = smooth_average_search(blocks, parse_rational(eps_text), j, sys, rounds);
        json rs = json::array();
        for (const auto& rr : s.rounds) rs.push_back(io::encode(rr));
        emit({{"average", io::encode(s.report)}, {"rounds", rs}}, out);
      } catch (const RoundsExhaustedError& e) {
        json rs = json::array();
        for (const auto& rr : e.rounds()) rs.push_back(io::encode(rr));
        emit({{"error", "RoundsExhausted"}, {"rounds", rs}}, out);
        throw;
      }
    };
  });

  // distort -----------------------------------------------------------------
  auto* dis = app.add_subcommand("distort", "Distortion experiments");
  dis->require_subcommand(1);
  std::size_t j0 = 1;
  std::string d_text = "6";
  auto* dis_pair = dis->add_subcommand("pair", "Vectors v, w with ‖v‖_{j0}/‖w‖_{j0} large");
  dis_pair->add_option("--blocks", blocks_path)->required();
  dis_pair->add_option("--params", params_path)->required();
  dis_pair->add_option("--j0", j0)->required();
  dis_pair->add_option("--j", j)->required();
  dis_pair->add_option("--d", d_text)->capture_default_str();
  dis_pair->add_flag("--normalize", normalize, "Scale blocks to norm 1 first");
  dis_pair->callback([&] {
    action = [&] {
      const ParamSystem sys = read_params(params_path);
      emit(io::encode(distortion_pair(load_blocks(&sys), j0, j, sys, parse_rational(d_text))), out);
    };
  });
  std::string c1 = "1", c2 = "1", c3 = "1", delta_text;
  Index kj = 1, nj = 1;
  auto* dis_hi = dis->add_subcommand("hicheck", "Lower and upper estimates for Σ a_i z_i");
  dis_hi->add_option("--blocks", blocks_path, "The vectors z_i")->required();
  dis_hi->add_option("--params", params_path)->required();
  dis_hi->add_option("--j", j)->required();
  dis_hi->add_option("--k", kj)->required();
  dis_hi->add_option("--n", nj)->required();
  dis_hi->add_option("--delta", delta_text)->required();
  dis_hi->add_option("--c1", c1)->capture_default_str();
  dis_hi->add_option("--c2", c2)->capture_default_str();
  dis_hi->add_option("--c3", c3)->capture_default_str();
  dis_hi->callback([&] {
    action = [&] {
      const ParamSystem sys = read_params(params_path);
      const auto zs = io::decode_blocks(read_json(blocks_path));
      const HiConstants c{parse_rational(c1), parse_rational(c2), parse_rational(c3)};
      const HiReport rep = hi_check(zs, j, c, kj, nj, parse_rational(delta_text), sys);
      emit(io::encode(rep), out);
      exit_status = rep.cond1 && rep.cond2 ? 0 : 1;
    };
  });

  // code --------------------------------------------------------------------
  auto* cod = app.add_subcommand("code", "Coding σ and dependent sequences");
  cod->require_subcommand(1);
  std::string seq_path, registry_path;
  Index p = 1;
  std::size_t i = 1;
  auto* cod_sigma = cod->add_subcommand("sigma", "σ of a tree sequence (recorded in the registry)");
  cod_sigma->add_option("--seq", seq_path)->required();
  cod_sigma->add_option("--registry", registry_path)->required();
  cod_sigma->add_option("--params", params_path)->required();
  cod_sigma->callback([&] {
    action = [&] {
      const ParamSystem sys = read_params(params_path);
      SigmaRegistry reg(registry_path);
      const SigmaValue v = sigma_assign(io::decode_trees(read_json(seq_path)), reg, sys);
      manifest.outputs.push_back(registry_path);
      emit({{"index", v.index}, {"value", v.value}}, out);
    };
  });
  auto* cod_dep = cod->add_subcommand("depcheck", "Is the sequence S_p-dependent? (exit 0 yes, 1 no)");
  cod_dep->add_option("--seq", seq_path)->required();
  cod_dep->add_option("--registry", registry_path)->required();
  cod_dep->add_option("--params", params_path)->required();
  cod_dep->add_option("--p", p)->required();
  cod_dep->callback([&] {
    action = [&] {
      const ParamSystem sys = read_params(params_path);
      SigmaRegistry reg(registry_path);
      const Verdict v = is_dependent(io::decode_trees(read_json(seq_path)), p, reg, sys);
      manifest.outputs.push_back(registry_path);
      emit({{"dependent", v.ok}, {"reasons", v.reasons}}, out);
      exit_status = v.ok ? 0 : 1;
    };
  });
  auto* cod_fun = cod->add_subcommand("functional", "(Σ μ_T) / m_{2i+1} for an S_{n_{2i+1}}-dependent sequence");
  cod_fun->add_option("--seq", seq_path)->required();
  cod_fun->add_option("--registry", registry_path)->required();
  cod_fun->add_option("--params", params_path)->required();
  cod_fun->add_option("--p", p)->required();
  cod_fun->add_option("--i", i)->required();
  cod_fun->callback([&] {
    action = [&] {
      const ParamSystem sys = read_params(params_path);
      SigmaRegistry reg(registry_path);
      const Measure f = dependent_functional(io::decode_trees(read_json(seq_path)), i, p, reg, sys);
      manifest.outputs.push_back(registry_path);
      emit({{"measure", io::encode(f)}}, out);
    };
  });

  // verify ------------------------------------------------------------------
  auto* ver = app.add_subcommand("verify", "Property suite (exit 0 iff every check passes)");
  std::string suite = "all";
  verify::Options vopts;
  ver->add_option("--suite", suite, "all, schreier, measures, norms, trees, distortion or coding")->capture_default_str();
  ver->add_option("--params", params_path, "Regime for the norm, tree and renorm checks");
  ver->add_option("--seed", vopts.seed)->capture_default_str();
  ver->add_option("--samples", vopts.norm_samples, "Vectors per regime for the norm oracle")->capture_default_str();
  ver->callback([&] {
    action = [&] {
      manifest.seed = vopts.seed;
      if (!params_path.empty()) vopts.regimes.push_back(read_params(params_path));
      const auto results = verify::run_suite(suite, vopts);
      json rows = json::array();
      bool all = true;
      for (const auto& res : results) {
        all = all && res.pass;
        std::cerr << (res.pass ? "PASS" : "FAIL") << "  " << res.id << "  " << res.name << "  (" << res.detail << ")\n";
        rows.push_back({{"id", res.id}, {"name", res.name}, {"pass", res.pass}, {"detail", res.detail}});
      }
      emit({{"suite", suite}, {"checks", rows}, {"pass", all}}, out);
      exit_status = all ? 0 : 1;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  manifest.command = join_argv(argc, argv);
  try {
    if (action) action();
  } catch (const InvalidTreeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& v : e.violations()) std::cerr << "  " << v << "\n";
    return exit_code(e.kind());
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_status;
}
