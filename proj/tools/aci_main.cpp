// Command-line interface: information measures, common-part decompositions,
// trade-off regions, slices, and secure-sampling rate bounds for finite joint
// distributions.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aci/bounds.hpp"
#include "aci/gaussian.hpp"
#include "aci/gk.hpp"
#include "aci/protocol.hpp"
#include "aci/region.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

struct DistSpec {
  std::string raw;
  bool is_connected_builtin = false;
};

aci::JointPMF parse_dist(const std::string& spec, bool* was_connected = nullptr) {
  const auto colon = spec.find(':');
  const std::string name = colon == std::string::npos ? spec : spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (was_connected) *was_connected = (name == "connected");
  if (name == "file") {
    if (rest.empty()) aci::fail(aci::ErrorCode::BadInput, "file: needs a path");
    return aci::load_pmf_file(rest);
  }

  // key=value,... in declaration order of each builtin's parameters
  std::map<std::string, double> kv;
  std::string token;
  std::stringstream ss(rest);
  while (std::getline(ss, token, ',')) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) {
      aci::fail(aci::ErrorCode::BadInput, "expected key=value in dist spec, got \"" + token + "\"");
    }
    kv[token.substr(0, eq)] = std::stod(token.substr(eq + 1));
  }
  auto need = [&](const char* key) {
    const auto it = kv.find(key);
    if (it == kv.end()) {
      aci::fail(aci::ErrorCode::BadInput, std::string("dist spec missing ") + key);
    }
    return it->second;
  };
  if (name == "zsource") return aci::builtin("zsource", {need("p")});
  if (name == "connected") return aci::builtin("connected", {need("delta")});
  if (name == "independent_uniform")
    return aci::builtin("independent_uniform", {need("n"), need("m")});
  if (name == "identical_uniform") return aci::builtin("identical_uniform", {need("n")});
  aci::fail(aci::ErrorCode::UnknownName, "unknown dist \"" + name + "\"");
}

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::fputs(text.c_str(), stdout);
    if (!text.empty() && text.back() != '\n') std::fputc('\n', stdout);
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) aci::fail(aci::ErrorCode::BadInput, "cannot write " + output_path);
  out << text;
}

json region_json_doc(const aci::KRegionApprox& region) {
  return json::parse(aci::region_to_json(region));
}

struct SweepConfig {
  int g = 20;
  int restarts = 32;
  int q_size = 0;
  double tol = 1e-9;
  unsigned long long seed = 0;
  int threads = 0;

  aci::OptOptions opt_options() const {
    aci::OptOptions o;
    o.q_size = q_size;
    o.restarts = restarts;
    o.tol = tol;
    o.seed = seed;
    o.threads = threads;
    return o;
  }

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--sweep-g", g, "weight grid resolution");
    cmd->add_option("--restarts", restarts, "random restarts per direction");
    cmd->add_option("--q-size", q_size, "auxiliary alphabet size (0: |X||Y|+2)");
    cmd->add_option("--tol", tol, "first-order tolerance");
    cmd->add_option("--seed", seed, "seed for all randomized steps");
    cmd->add_option("--threads", threads, "worker threads (0: auto)");
  }
};

aci::KRegionApprox sweep_region(const aci::JointPMF& pmf, const SweepConfig& cfg,
                                const std::string& source) {
  return aci::build_region(
      aci::sweep_with_extras(pmf, cfg.g, aci::axis_exposing_directions(), cfg.opt_options()),
      source);
}

std::vector<aci::ScalarWeights> certify_menu() {
  return {aci::ScalarWeights::make(1, 1, 1),     aci::ScalarWeights::make(1, 1, 3),
          aci::ScalarWeights::make(1, 1, 8),     aci::ScalarWeights::make(9, 9, 2),
          aci::ScalarWeights::make(1, 2, 2),     aci::ScalarWeights::make(2, 1, 2)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"assisted common information toolkit"};
  app.require_subcommand(1);

  std::string dist_spec, setup_spec, target_spec, output_path, format = "json";
  std::string kind = "rd", protocol_path;
  double level = 0.0, rho = 0.95, r_max = 2.0, r_step = 0.05, tol = 1e-9;
  int instances = 20, certify_resolution = 4000;
  bool certified_only = false, do_certify = false;
  SweepConfig cfg;

  auto* info_cmd = app.add_subcommand("info", "entropies and mutual information");
  info_cmd->add_option("--dist", dist_spec, "distribution spec")->required();
  info_cmd->add_option("--output", output_path, "output path");

  auto* gk_cmd = app.add_subcommand("gk", "common-part decomposition");
  gk_cmd->add_option("--dist", dist_spec)->required();
  gk_cmd->add_option("--output", output_path);

  auto* ww_cmd = app.add_subcommand("ww", "monotone triple");
  ww_cmd->add_option("--dist", dist_spec)->required();
  ww_cmd->add_option("--output", output_path);

  auto* region_cmd = app.add_subcommand("region", "sweep the trade-off region");
  region_cmd->add_option("--dist", dist_spec)->required();
  region_cmd->add_option("--output", output_path);
  region_cmd->add_flag("--certify", do_certify, "add certified support directions");
  region_cmd->add_option("--certify-resolution", certify_resolution);
  cfg.add_flags(region_cmd);

  auto* slice_cmd = app.add_subcommand("slice", "2D slice of the region");
  slice_cmd->add_option("--dist", dist_spec)->required();
  slice_cmd->add_option("--kind", kind, "rd or ci")->check(CLI::IsMember({"rd", "ci"}));
  slice_cmd->add_option("--level", level, "slice level");
  slice_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  slice_cmd->add_option("--output", output_path);
  cfg.add_flags(slice_cmd);

  auto* wyner_cmd = app.add_subcommand("wyner", "common information of the zero-residual slice");
  wyner_cmd->add_option("--dist", dist_spec)->required();
  wyner_cmd->add_option("--output", output_path);
  cfg.add_flags(wyner_cmd);

  auto* bound_cmd = app.add_subcommand("bound", "secure sampling rate bounds");
  bound_cmd->add_option("--setup", setup_spec)->required();
  bound_cmd->add_option("--target", target_spec)->required();
  bound_cmd->add_flag("--certified-only", certified_only, "use only certified directions");
  bound_cmd->add_flag("--certify", do_certify, "certify target directions when possible");
  bound_cmd->add_option("--certify-resolution", certify_resolution);
  bound_cmd->add_option("--output", output_path);
  cfg.add_flags(bound_cmd);

  auto* gaussian_cmd = app.add_subcommand("gaussian", "jointly Gaussian trade-off curve");
  gaussian_cmd->add_option("--rho", rho, "correlation coefficient");
  gaussian_cmd->add_option("--r-max", r_max);
  gaussian_cmd->add_option("--r-step", r_step);
  gaussian_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  gaussian_cmd->add_option("--output", output_path);

  auto* protocol_cmd = app.add_subcommand("protocol", "run a two-party protocol");
  protocol_cmd->add_option("--spec", protocol_path, "protocol JSON path")->required();
  protocol_cmd->add_option("--target", target_spec, "target distribution for the security check");
  protocol_cmd->add_option("--tol", tol, "security tolerance");
  protocol_cmd->add_option("--output", output_path);

  auto* suite_cmd = app.add_subcommand("suite", "monotone-region property suite");
  suite_cmd->add_option("--instances", instances);
  suite_cmd->add_option("--output", output_path);
  cfg.add_flags(suite_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*info_cmd) {
      const aci::JointPMF pmf = parse_dist(dist_spec);
      const aci::InfoSummary s = aci::info_summary(pmf);
      json doc = {{"H_X", s.H_X},
                  {"H_Y", s.H_Y},
                  {"H_XY", s.H_XY},
                  {"H_X_given_Y", s.H_X_given_Y},
                  {"H_Y_given_X", s.H_Y_given_X},
                  {"I_XY", s.I_XY}};
      emit(doc.dump(2), output_path);
    } else if (*gk_cmd) {
      const aci::JointPMF pmf = parse_dist(dist_spec);
      const aci::GKDecomposition gk = aci::gk_decompose(pmf);
      json doc = {{"x_component", gk.x_component},
                  {"y_component", gk.y_component},
                  {"component_probs", gk.component_probs},
                  {"common_entropy", gk.common_entropy},
                  {"residual_mi", gk.residual_mi}};
      emit(doc.dump(2), output_path);
    } else if (*ww_cmd) {
      const aci::JointPMF pmf = parse_dist(dist_spec);
      const aci::WWMonotones m = aci::ww_monotones(pmf);
      json doc = {{"h_y_down_x", m.h_y_down_x},
                  {"h_x_down_y", m.h_x_down_y},
                  {"i_given_meet", m.i_given_meet}};
      emit(doc.dump(2), output_path);
    } else if (*region_cmd) {
      const aci::JointPMF pmf = parse_dist(dist_spec);
      aci::KRegionApprox region = sweep_region(pmf, cfg, "sweep g=" + std::to_string(cfg.g));
      if (do_certify && pmf.support().size() <= 4) {
        aci::certify_region(&region, pmf, certify_menu(), certify_resolution, cfg.threads);
      }
      emit(region_json_doc(region).dump(2), output_path);
    } else if (*slice_cmd) {
      const aci::JointPMF pmf = parse_dist(dist_spec);
      const aci::KRegionApprox region = sweep_region(pmf, cfg, "sweep");
      const double base = aci::info_summary(pmf).I_XY;
      const aci::Slice2D s = aci::slice(
          region, kind == "rd" ? aci::SliceKind::RD : aci::SliceKind::CI, level, base,
          std::max(41, 2 * cfg.g + 1));
      if (format == "csv") {
        emit(aci::slice_to_csv(s), output_path);
      } else {
        json doc = {{"kind", kind}, {"level", level}, {"frontier", json::array()}};
        for (const auto& p : s.frontier) doc["frontier"].push_back({p[0], p[1]});
        emit(doc.dump(2), output_path);
      }
    } else if (*wyner_cmd) {
      const aci::JointPMF pmf = parse_dist(dist_spec);
      const aci::KRegionApprox region = sweep_region(pmf, cfg, "sweep");
      const double base = aci::info_summary(pmf).I_XY;
      const aci::WynerResult w = aci::wyner_gap(region, base);
      const aci::WynerDirect d = aci::wyner_direct(pmf, 0, cfg.seed);
      json doc = {{"wyner_gap", w.gap},
                  {"wyner_ci", w.wyner_ci},
                  {"direct_min_i_xyu", d.value},
                  {"direct_markov_residual", d.z_residual},
                  {"base_mi", base}};
      emit(doc.dump(2), output_path);
    } else if (*bound_cmd) {
      bool setup_connected = false, target_connected = false;
      const aci::JointPMF setup = parse_dist(setup_spec, &setup_connected);
      const aci::JointPMF target = parse_dist(target_spec, &target_connected);
      const aci::RateBoundResult ww = aci::ww_bound(setup, target);
      aci::KRegionApprox setup_region = sweep_region(setup, cfg, "setup sweep");
      aci::KRegionApprox target_region = sweep_region(target, cfg, "target sweep");
      if ((do_certify || certified_only) && target.support().size() <= 4) {
        aci::certify_region(&target_region, target, certify_menu(), certify_resolution,
                            cfg.threads);
      }
      const aci::RateBoundResult kb = aci::k_bound(setup_region, target_region, certified_only);
      auto tri = [](aci::TriState t) {
        return t == aci::TriState::Yes ? "yes" : t == aci::TriState::No ? "no" : "unknown";
      };
      json notes = json::array();
      notes.push_back(kb.notes);
      if (setup_connected || target_connected) {
        notes.push_back(aci::connected_reconstruction_note());
      }
      json doc = {{"ww", json::parse(aci::bound_to_json(ww))},
                  {"kregion", json::parse(aci::bound_to_json(kb))},
                  {"is_trivial_setup", tri(aci::is_trivial(setup_region))},
                  {"is_trivial_target", tri(aci::is_trivial(target_region))},
                  {"notes", notes}};
      emit(doc.dump(2), output_path);
    } else if (*gaussian_cmd) {
      const aci::GaussianPair pair = aci::GaussianPair::make(rho);
      std::vector<double> rs;
      for (double r = 0.0; r <= r_max + 1e-12; r += r_step) rs.push_back(r);
      const auto rows = aci::gaussian_curve(pair, rs);
      if (format == "csv") {
        emit(aci::gaussian_curve_to_csv(rows), output_path);
      } else {
        json doc = json::array();
        for (const auto& r : rows) doc.push_back({{"R", r.R}, {"R_CI", r.R_CI}, {"R_RD", r.R_RD}});
        emit(doc.dump(2), output_path);
      }
    } else if (*protocol_cmd) {
      std::ifstream in(protocol_path);
      if (!in) aci::fail(aci::ErrorCode::BadInput, "cannot open " + protocol_path);
      std::stringstream ss;
      ss << in.rdbuf();
      const aci::ProtocolSpec spec = aci::protocol_from_json(ss.str());
      const aci::ExecutionResult res = aci::run_protocol(spec);
      json doc;
      doc["output_pmf"] = json::parse(aci::serialize_pmf(res.output_pmf));
      doc["view_space"] = {{"alice", res.view_pmf.nx()}, {"bob", res.view_pmf.ny()}};
      if (!target_spec.empty()) {
        const aci::JointPMF target = parse_dist(target_spec);
        const aci::SecurityVerdict v = aci::security_check(res, target, tol);
        doc["security"] = {{"secure", v.secure},
                           {"reason", v.reason},
                           {"output_error", v.output_error},
                           {"leak_alice", v.leak_alice},
                           {"leak_bob", v.leak_bob}};
      }
      emit(doc.dump(2), output_path);
    } else if (*suite_cmd) {
      aci::SuiteOptions o;
      o.instances = instances;
      o.seed = cfg.seed;
      o.sweep_g = std::min(cfg.g, 8);
      o.restarts = std::min(cfg.restarts, 8);
      o.threads = cfg.threads;
      emit(aci::suite_report_to_json(aci::monotonicity_suite(o)), output_path);
    }
  } catch (const aci::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
