#include "mvs/cli.hpp"

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "mvs/error.hpp"
#include "mvs/eval.hpp"
#include "mvs/formats.hpp"
#include "mvs/rank.hpp"
#include "mvs/report.hpp"
#include "mvs/service.hpp"
#include "mvs/synthgen.hpp"

namespace mvs::cli {
namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenArgs {
  std::string config_path;
  SynthConfig knobs;
  std::string out;
};

struct BuildArgs {
  std::string manifest;
  std::string features;
  std::string out;
};

struct QueryArgs {
  std::string index;
  std::string query;
  std::string strategy;
  std::size_t topk = 20;
  std::string format = "json";
  bool renormalize_ef = false;
  bool literal_minwavg = false;
};

struct EvalArgs {
  std::string index;
  std::string queries;
  std::string strategies = "all";
  std::size_t k = 0;
  std::string ap_mode = "paper";
  std::string out;
  bool no_timing = false;
};

struct ServeArgs {
  std::string index;
  int port = 8080;
};

Strategy strategy_or_usage(const std::string& name) {
  if (auto s = parse_strategy(name)) return *s;
  throw UsageError("unknown strategy '" + name +
                   "'; valid strategies: " + valid_strategy_names());
}

std::vector<Strategy> parse_strategy_list(const std::string& text) {
  if (text == "all") return {kAllStrategies.begin(), kAllStrategies.end()};
  std::vector<Strategy> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const Strategy s = strategy_or_usage(item);
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  if (out.empty()) throw UsageError("--strategies is empty");
  return out;
}

void check_writable_parent(const std::string& path) {
  const auto parent = fs::absolute(path).parent_path();
  if (!fs::is_directory(parent)) {
    throw UsageError("output directory '" + parent.string() +
                     "' does not exist");
  }
}

int run_gen(const GenArgs& a, bool from_config, std::ostream& out) {
  const SynthConfig config =
      from_config ? synth_config_from_json(read_file(a.config_path)) : a.knobs;
  const auto data = generate(config);
  write_dataset(data, a.out);
  out << "wrote " << data.manifest.objects.size() << " objects ("
      << data.features.records.size() << " views, dim " << data.manifest.dim
      << ") and " << data.queries.size() << " queries to " << a.out << "\n";
  return kExitOk;
}

int run_build(const BuildArgs& a, std::ostream& out) {
  check_writable_parent(a.out);
  const auto manifest = load_manifest(a.manifest);
  const auto features = load_features(a.features);
  const auto db = Database::build(manifest, features);
  save_index(db, a.out);
  out << "built index " << a.out << ": " << db.size() << " objects, "
      << db.view_count() << " views, dim " << db.dim() << "\n";
  return kExitOk;
}

int run_query(const QueryArgs& a, std::ostream& out) {
  const Strategy strategy = strategy_or_usage(a.strategy);
  if (a.topk == 0) throw UsageError("--topk must be positive");
  const auto db = load_index(a.index);
  const auto query = load_query(a.query);

  RankOptions options;
  options.renormalize_ef = a.renormalize_ef;
  options.late.literal_min_wavg = a.literal_minwavg;
  const auto ranked = rank(db, query.views, strategy, a.topk, options);

  if (a.format == "json") {
    nlohmann::json results = nlohmann::json::array();
    for (const auto& e : ranked) {
      results.push_back({{"object_id", e.object_id},
                         {"category", db.object(e.object_index).category},
                         {"distance", e.distance}});
    }
    out << results.dump(2) << "\n";
  } else {
    out << "rank,object_id,category,distance\n";
    for (std::size_t r = 0; r < ranked.size(); ++r) {
      const auto& e = ranked[r];
      out << (r + 1) << ',' << e.object_id << ','
          << db.object(e.object_index).category << ','
          << format_fixed6(e.distance) << "\n";
    }
  }
  return kExitOk;
}

int run_eval(const EvalArgs& a, std::ostream& out) {
  const auto strategies = parse_strategy_list(a.strategies);
  const auto mode = parse_ap_mode(a.ap_mode);
  if (!mode) {
    throw UsageError("--ap-mode must be 'paper' or 'standard'");
  }
  const auto db = load_index(a.index);
  const auto queries = load_query_set(a.queries);

  EvalOptions options;
  options.k = a.k;
  options.ap_mode = *mode;
  options.timing = !a.no_timing;
  const auto report = evaluate(db, queries, strategies, options);
  write_report(report, a.out);
  out << map_csv(report);
  return kExitOk;
}

int run_serve(const ServeArgs& a, std::ostream& out, std::ostream& err) {
  const char* bind_env = std::getenv("MVS_BIND");
  const std::string host = bind_env && *bind_env ? bind_env : "127.0.0.1";

  // Signals are consumed by a dedicated thread via sigwait, so they must be
  // blocked before any other thread starts.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  QueryService service;
  HttpServer server(service);
  const int port = server.bind(host, a.port);
  out << "listening on " << host << ":" << port << "\n" << std::flush;

  std::jthread loader([&] {
    try {
      service.set_database(
          std::make_shared<const Database>(load_index(a.index)));
      out << "index loaded\n" << std::flush;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      server.stop();
    }
  });
  std::jthread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });

  server.listen();
  loader.join();
  // Unblock the signal waiter if the server stopped for another reason.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return service.ready() ? kExitOk : kExitData;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Multi-view object retrieval with early and late fusion", "mvs"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic dataset");
  auto* config_opt = gen_cmd->add_option("--config", gen.config_path,
                                         "Synth config JSON")
                         ->check(CLI::ExistingFile);
  std::vector<CLI::Option*> knob_opts = {
      gen_cmd->add_option("--num-categories", gen.knobs.num_categories),
      gen_cmd->add_option("--objects-per-category",
                          gen.knobs.objects_per_category),
      gen_cmd->add_option("--queries-per-category",
                          gen.knobs.queries_per_category),
      gen_cmd->add_option("--views-min", gen.knobs.views_min),
      gen_cmd->add_option("--views-max", gen.knobs.views_max),
      gen_cmd->add_option("--dim", gen.knobs.dim),
      gen_cmd->add_option("--category-separation",
                          gen.knobs.category_separation),
      gen_cmd->add_option("--object-spread", gen.knobs.object_spread),
      gen_cmd->add_option("--view-noise-sigma", gen.knobs.view_noise_sigma),
      gen_cmd->add_option("--clutter-sigma", gen.knobs.clutter_sigma),
      gen_cmd->add_option("--seed", gen.knobs.seed),
  };
  for (auto* opt : knob_opts) opt->excludes(config_opt);
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build", "Build an MVI1 index");
  build_cmd->add_option("--manifest", build.manifest)
      ->required()
      ->check(CLI::ExistingFile);
  build_cmd->add_option("--features", build.features)
      ->required()
      ->check(CLI::ExistingFile);
  build_cmd->add_option("--out", build.out)->required();

  QueryArgs query;
  auto* query_cmd = app.add_subcommand("query", "Rank the index for one query");
  query_cmd->add_option("--index", query.index)
      ->required()
      ->check(CLI::ExistingFile);
  query_cmd->add_option("--query", query.query)
      ->required()
      ->check(CLI::ExistingFile);
  query_cmd->add_option("--strategy", query.strategy)->required();
  query_cmd->add_option("--topk", query.topk)->capture_default_str();
  query_cmd->add_option("--format", query.format)
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  query_cmd->add_flag("--renormalize-ef", query.renormalize_ef);
  query_cmd->add_flag("--literal-minwavg", query.literal_minwavg);

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate strategies on a query set");
  eval_cmd->add_option("--index", eval.index)
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--queries", eval.queries, "Query set directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  eval_cmd->add_option("--strategies", eval.strategies,
                       "Comma-separated strategy names or 'all'")
      ->capture_default_str();
  eval_cmd->add_option("--k", eval.k, "Result-list length (0 = database size)")
      ->capture_default_str();
  eval_cmd->add_option("--ap-mode", eval.ap_mode)->capture_default_str();
  eval_cmd->add_option("--out", eval.out, "Report directory")->required();
  eval_cmd->add_flag("--no-timing", eval.no_timing);

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Serve queries over HTTP");
  serve_cmd->add_option("--index", serve.index)
      ->required()
      ->check(CLI::ExistingFile);
  serve_cmd->add_option("--port", serve.port)
      ->check(CLI::Range(0, 65535))
      ->capture_default_str();

  std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1),
                                    args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return run_gen(gen, config_opt->count() > 0, out);
    if (build_cmd->parsed()) return run_build(build, out);
    if (query_cmd->parsed()) return run_query(query, out);
    if (eval_cmd->parsed()) return run_eval(eval, out);
    if (serve_cmd->parsed()) return run_serve(serve, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace mvs::cli
