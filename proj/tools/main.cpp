// Command-line front end: JSON in, JSON out, exit 0 on success, 1 on usage
// problems, 2 when a mathematical precondition fails.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "relustab/relustab.hpp"

namespace {

using relustab::ojson;

constexpr const char* kVersion = "0.1.0";

ojson load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw relustab::UsageError("cannot open " + path);
  return ojson::parse(in);  // parse_error carries the byte position
}

void emit(const ojson& payload, const std::optional<std::string>& out_path) {
  std::string text = payload.dump(2);
  text.push_back('\n');
  if (out_path) {
    std::ofstream out(*out_path);
    if (!out) throw relustab::UsageError("cannot write " + *out_path);
    out << text;
  } else {
    std::cout << text;
  }
}

ojson ok_payload() {
  ojson j;
  j["ok"] = true;
  return j;
}

void finish(ojson& j) { j["meta"] = ojson{{"version", kVersion}}; }

std::string format_f64(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_pathology_csv(const std::string& path, relustab::Family family,
                         relustab::PathologyParams params) {
  std::ofstream out(path);
  if (!out) throw relustab::UsageError("cannot write " + path);
  out << "k,measured_distance,parameter_lower_bound\n";
  for (int k : {1, 2, 3, 5, 8}) {
    params.k = k;
    auto mm = relustab::measure_case(relustab::build_case(family, params));
    out << k << "," << format_f64(mm.sobolev_dist) << ","
        << format_f64(mm.param_lower_bound) << "\n";
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Inverse-stability toolkit for shallow bias-free ReLU networks"};
  app.require_subcommand(1);
  std::optional<std::string> out_path;

  // seminorm
  auto* seminorm_cmd = app.add_subcommand("seminorm", "Exact Sobolev seminorm");
  std::string net_path;
  seminorm_cmd->add_option("net", net_path, "network JSON")->required();
  seminorm_cmd->add_option("-o,--output", out_path, "write the result here");

  // distance
  auto* distance_cmd =
      app.add_subcommand("distance", "Sobolev seminorm distance of two nets");
  std::string dist_a, dist_b;
  distance_cmd->add_option("a", dist_a, "first network JSON")->required();
  distance_cmd->add_option("b", dist_b, "second network JSON")->required();
  distance_cmd->add_option("-o,--output", out_path);

  // check
  auto* check_cmd = app.add_subcommand("check", "Check conditions C.1-C.3");
  std::string check_gamma, check_theta;
  double check_beta = 0.0;
  check_cmd->add_option("gamma", check_gamma)->required();
  check_cmd->add_option("theta", check_theta)->required();
  check_cmd->add_option("--beta", check_beta, "balancedness bound")->required();
  check_cmd->add_option("-o,--output", out_path);

  // canonicalize
  auto* canon_cmd =
      app.add_subcommand("canonicalize", "Zero-pair normalization and normal forms");
  std::string canon_net;
  bool canon_merge = false, canon_balance = false;
  canon_cmd->add_option("net", canon_net)->required();
  canon_cmd->add_flag("--merge", canon_merge, "merge parallel directions");
  canon_cmd->add_flag("--balance", canon_balance, "balance every neuron");
  canon_cmd->add_option("-o,--output", out_path);

  // reparam
  auto* reparam_cmd =
      app.add_subcommand("reparam", "Certified reparametrization of theta near gamma");
  std::string rp_gamma, rp_theta, rp_mode;
  std::optional<double> rp_beta;
  reparam_cmd->add_option("gamma", rp_gamma)->required();
  reparam_cmd->add_option("theta", rp_theta)->required();
  reparam_cmd->add_option("--mode", rp_mode, "restricted or general")
      ->required()
      ->check(CLI::IsMember({"restricted", "general"}));
  reparam_cmd->add_option("--beta", rp_beta, "beta for general mode");
  reparam_cmd->add_option("-o,--output", out_path);

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Audit a certificate");
  std::string vf_gamma, vf_theta, vf_cert;
  verify_cmd->add_option("gamma", vf_gamma)->required();
  verify_cmd->add_option("theta", vf_theta)->required();
  verify_cmd->add_option("certificate", vf_cert)->required();
  verify_cmd->add_option("-o,--output", out_path);

  // lift
  auto* lift_cmd =
      app.add_subcommand("lift", "Lift a biased net into the restricted space");
  std::string lift_net;
  lift_cmd->add_option("net", lift_net, "biased network JSON")->required();
  lift_cmd->add_option("-o,--output", out_path);

  // augment-data
  auto* aug_cmd = app.add_subcommand("augment-data", "Append (1,-1) to every sample");
  std::string aug_data;
  aug_cmd->add_option("data", aug_data, "dataset JSON")->required();
  aug_cmd->add_option("-o,--output", out_path);

  // pathology
  auto* path_cmd = app.add_subcommand("pathology", "Build and measure a counterexample");
  std::string path_family;
  int path_k = 1;
  double path_r = 1.0;
  std::optional<std::string> path_csv;
  path_cmd->add_option("family", path_family)->required();
  path_cmd->add_option("--k", path_k, "family index k");
  path_cmd->add_option("--r", path_r, "radius parameter (unbalanced_complete)");
  path_cmd->add_option("--csv", path_csv, "write a (k, distance, bound) curve");
  path_cmd->add_option("-o,--json,--output", out_path);

  // landscape
  auto* land_cmd = app.add_subcommand("landscape", "Loss-landscape calculus");
  land_cmd->require_subcommand(1);
  auto* quality_cmd = land_cmd->add_subcommand("quality", "Local-minimum quality bound");
  double q_loss = 0.0, q_c = 0.0, q_rprime = 0.0, q_dist = 0.0, q_eta = 0.0;
  quality_cmd->add_option("--loss", q_loss, "loss at the comparison realization")
      ->required();
  quality_cmd->add_option("--c", q_c, "Lipschitz constant")->required();
  quality_cmd->add_option("--rprime", q_rprime, "local-minimum radius")->required();
  quality_cmd->add_option("--dist", q_dist, "distance to the comparison")->required();
  quality_cmd->add_option("--eta", q_eta, "approximability gap")->required();
  quality_cmd->add_option("-o,--output", out_path);

  auto* radius_cmd = land_cmd->add_subcommand("radius", "Parameter-to-realization radius");
  double r_r = 0.0, r_s = 0.0, r_alpha = 0.0;
  radius_cmd->add_option("--r", r_r, "parameter radius")->required();
  radius_cmd->add_option("--s", r_s, "stability factor")->required();
  radius_cmd->add_option("--alpha", r_alpha, "stability exponent")->required();
  radius_cmd->add_option("-o,--output", out_path);

  auto* local_cmd = land_cmd->add_subcommand("localmin", "Empirical local-minimum search");
  std::string lm_net, lm_data;
  double lm_radius = 0.0;
  long lm_trials = 10000;
  std::uint64_t lm_seed = 1;
  local_cmd->add_option("net", lm_net)->required();
  local_cmd->add_option("data", lm_data)->required();
  local_cmd->add_option("--radius", lm_radius)->required();
  local_cmd->add_option("--trials", lm_trials);
  local_cmd->add_option("--seed", lm_seed);
  local_cmd->add_option("-o,--output", out_path);

  CLI11_PARSE(app, argc, argv);

  ojson payload = ok_payload();

  if (*seminorm_cmd) {
    auto net = relustab::expect_shallow(relustab::parse_network(load_json(net_path)),
                                        "seminorm");
    auto b = relustab::seminorm(net);
    payload["value"] = b.value;
    payload["argmax_pattern"] = relustab::to_json(b.argmax_pattern);
    payload["cells"] = b.cells();
  } else if (*distance_cmd) {
    auto a = relustab::expect_shallow(relustab::parse_network(load_json(dist_a)),
                                      "distance");
    auto b = relustab::expect_shallow(relustab::parse_network(load_json(dist_b)),
                                      "distance");
    auto res = relustab::sobolev_distance(a, b);
    payload["value"] = res.value;
    payload["argmax_pattern"] = relustab::to_json(res.argmax_pattern);
    payload["cells"] = res.cells();
  } else if (*check_cmd) {
    auto gamma = relustab::expect_shallow(relustab::parse_network(load_json(check_gamma)),
                                          "check");
    auto theta = relustab::expect_shallow(relustab::parse_network(load_json(check_theta)),
                                          "check");
    auto rep = relustab::check_conditions(gamma, theta, check_beta);
    payload["r"] = rep.r;
    payload["all_ok"] = rep.all_ok();
    payload["report"] = relustab::to_json(rep);
  } else if (*canon_cmd) {
    auto net = relustab::expect_shallow(relustab::parse_network(load_json(canon_net)),
                                        "canonicalize");
    net = relustab::normalize_zero_pairs(net);
    if (canon_merge) net = relustab::merge_parallel(net);
    if (canon_balance) net = relustab::balance(net);
    payload["network"] = relustab::to_json(net);
  } else if (*reparam_cmd) {
    auto gamma = relustab::expect_shallow(relustab::parse_network(load_json(rp_gamma)),
                                          "reparam");
    auto theta = relustab::expect_shallow(relustab::parse_network(load_json(rp_theta)),
                                          "reparam");
    auto mode = rp_mode == "restricted" ? relustab::ReparamMode::restricted
                                        : relustab::ReparamMode::general;
    auto cert = relustab::reparametrize(gamma, theta, mode, rp_beta);
    payload["certificate"] = relustab::to_json(cert);
  } else if (*verify_cmd) {
    auto gamma = relustab::expect_shallow(relustab::parse_network(load_json(vf_gamma)),
                                          "verify");
    auto theta = relustab::expect_shallow(relustab::parse_network(load_json(vf_theta)),
                                          "verify");
    auto cert = relustab::parse_certificate(load_json(vf_cert));
    auto chk = relustab::verify_certificate(gamma, theta, cert);
    payload["passed"] = chk.passed();
    payload["checks"] =
        ojson{{"realization", chk.realization_ok},
              {"bound", chk.bound_ok},
              {"distance", chk.distance_ok}};
    payload["r_recomputed"] = chk.r_recomputed;
    payload["achieved_recomputed"] = chk.achieved_recomputed;
  } else if (*lift_cmd) {
    auto biased = relustab::expect_biased(relustab::parse_network(load_json(lift_net)));
    auto lifted = relustab::lift_biased(biased);
    payload["network"] = relustab::to_json(lifted);
  } else if (*aug_cmd) {
    auto data = relustab::parse_dataset(load_json(aug_data));
    payload["dataset"] = relustab::to_json(relustab::augment_dataset(data));
  } else if (*path_cmd) {
    auto family = relustab::family_from_string(path_family);
    if (!family)
      throw relustab::UsageError("pathology: unknown family \"" + path_family + "\"");
    relustab::PathologyParams params;
    params.k = path_k;
    params.r = path_r;
    auto mm = relustab::measure_case(relustab::build_case(*family, params));
    payload["measurement"] = relustab::to_json(mm);
    if (path_csv) write_pathology_csv(*path_csv, *family, params);
  } else if (*quality_cmd) {
    relustab::QualityBoundInputs q{q_loss, q_c, q_rprime, q_dist, q_eta};
    payload["value"] = relustab::quality_bound(q);
  } else if (*radius_cmd) {
    payload["value"] = relustab::radius_transfer(r_r, r_s, r_alpha);
  } else if (*local_cmd) {
    auto net = relustab::expect_shallow(relustab::parse_network(load_json(lm_net)),
                                        "localmin");
    auto data = relustab::parse_dataset(load_json(lm_data));
    auto verdict = relustab::empirical_local_min_check(net, data, lm_radius,
                                                       lm_trials, lm_seed);
    payload["verdict"] = verdict.verdict();
    payload["base_loss"] = verdict.base_loss;
    payload["best_loss"] = verdict.best_loss;
    payload["trials"] = verdict.trials;
    if (verdict.improving)
      payload["improving"] = relustab::to_json(*verdict.improving);
  }

  finish(payload);
  emit(payload, out_path);
  return 0;
}

void emit_error(const char* kind, const std::string& message,
                const relustab::ConditionReport* report) {
  ojson j;
  j["ok"] = false;
  ojson err;
  err["kind"] = kind;
  err["message"] = message;
  if (report) err["report"] = relustab::to_json(*report);
  j["error"] = std::move(err);
  j["meta"] = ojson{{"version", kVersion}};
  std::cout << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const relustab::ConditionError& e) {
    emit_error("condition", e.what(), &e.report());
    return 2;
  } catch (const relustab::PreconditionError& e) {
    emit_error("precondition", e.what(), nullptr);
    return 2;
  } catch (const nlohmann::json::parse_error& e) {
    emit_error("parse", e.what(), nullptr);  // message carries the byte position
    return 1;
  } catch (const relustab::UsageError& e) {
    emit_error("usage", e.what(), nullptr);
    return 1;
  } catch (const std::exception& e) {
    emit_error("internal", e.what(), nullptr);
    return 1;
  }
}
