#include "ubcost/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "io.hpp"
#include "ubcost/ingest.hpp"
#include "ubcost/kernels.hpp"
#include "ubcost/radio.hpp"
#include "ubcost/scenario.hpp"

namespace ubcost::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct Inputs {
  Dataset dataset;
  std::vector<std::string> notes;
  Json digests = Json::array();
};

void add_digest(Json& digests, std::string_view role, const fs::path& path) {
  digests.push_back({{"role", role},
                     {"file", path.filename().string()},
                     {"sha256", io::sha256_hex(io::read_file(path))}});
}

InputPaths input_paths(const Options& o) {
  if (o.data_dir.empty()) throw DomainError("--data is required");
  auto paths = InputPaths::in_directory(o.data_dir);
  if (!o.cost_book.empty()) paths.cost_book = o.cost_book;
  return paths;
}

// Loads, validates and completes the dataset: missing wages are imputed.
Inputs load(const Options& o) {
  const auto paths = input_paths(o);
  Inputs in;
  add_digest(in.digests, "areas", paths.areas);
  add_digest(in.digests, "countries", paths.countries);
  add_digest(in.digests, "wages", paths.wages);
  add_digest(in.digests, "costbook", paths.cost_book);
  auto report = validate_inputs(paths);
  if (!report.violations.empty()) throw ValidationError(std::move(report.violations));
  in.dataset = std::move(*report.dataset);
  in.notes = std::move(report.notes);
  const bool missing = std::any_of(in.dataset.wages.begin(), in.dataset.wages.end(),
                                   [](const WageRow& w) { return !w.hourly_wage_usd; });
  if (missing) {
    auto imputed = impute_wages(in.dataset.wages);
    for (const auto& f : imputed.fits)
      in.notes.push_back("wages " + std::string(to_string(f.sector)) + ": imputed " +
                         std::to_string(f.imputed) + " from " + std::to_string(f.observed) +
                         " observations, R^2 = " + format_double(f.r_squared));
    in.dataset.wages = std::move(imputed.rows);
  }
  return in;
}

fs::path cache_dir(const Options& o) {
  if (!o.cache_dir.empty()) return o.cache_dir;
  if (const char* env = std::getenv("UBCOST_CACHE_DIR"); env && *env) return env;
  return {};
}

SimConfig sim_config_for(const Options& o, const Scenario* scenario) {
  SimConfig c;
  if (!o.sim_config.empty()) c = load_sim_config(o.sim_config);
  else if (scenario && !scenario->lookup_config.empty()) c = load_sim_config(scenario->lookup_config);
  if (o.seed) c.rng_seed = *o.seed;
  return c;
}

std::string iso_utc(std::time_t t) {
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Reproducible unless the caller opts into the wall clock.
Json timestamp(const Options& o) {
  if (o.wall_clock_timestamp)
    return iso_utc(std::chrono::system_clock::to_time_t(std::chrono::system_clock::now()));
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    char* end = nullptr;
    const auto v = std::strtoll(epoch, &end, 10);
    if (end && *end == '\0') return iso_utc(static_cast<std::time_t>(v));
  }
  return nullptr;
}

std::string render(const std::function<void(std::ostream&)>& writer) {
  std::ostringstream os;
  writer(os);
  return os.str();
}

// Stages outputs, publishes them, then writes manifest.json last.
void publish(const Options& o, io::StagedOutputs& staged,
             const std::vector<std::pair<std::string, std::string>>& files, Json manifest) {
  Json outputs = Json::array();
  for (const auto& [name, bytes] : files) {
    staged.stage(name, bytes);
    outputs.push_back({{"file", name}, {"sha256", io::sha256_hex(bytes)}});
  }
  manifest["timestamp"] = timestamp(o);
  manifest["outputs"] = std::move(outputs);
  staged.commit();
  io::write_file_atomic(o.out_dir / "manifest.json", manifest.dump(2) + "\n");
}

Json manifest_head(std::string_view command) {
  Json m;
  m["engine_version"] = kEngineVersion;
  m["command"] = command;
  return m;
}

void print_notes(std::ostream& err, const std::vector<std::string>& notes) {
  for (const auto& n : notes) err << "note: " << n << '\n';
}

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ValidationError& e) {
    for (const auto& v : e.violations()) err << "invalid: " << v.describe() << '\n';
    err << e.violations().size() << " violation(s)\n";
    return kDomainFailure;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const fs::filesystem_error& e) {
    err << "io error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDomainFailure;
  }
}

struct PreparedRun {
  Inputs inputs;
  std::vector<Scenario> scenarios;
  std::vector<SimConfig> configs;      // per scenario
  std::map<std::string, LookupSet> lookups;  // by sim config hash
};

PreparedRun prepare(const Options& o, bool need_two) {
  PreparedRun p;
  p.inputs = load(o);
  if (o.out_dir.empty()) throw DomainError("--out is required");
  if (o.scenarios.empty()) {
    if (need_two) throw DomainError("sweep needs at least two --scenario files");
    p.scenarios.push_back(baseline_scenario());
  }
  for (const auto& path : o.scenarios) {
    add_digest(p.inputs.digests, "scenario", path);
    p.scenarios.push_back(load_scenario(path));
  }
  if (!o.sim_config.empty()) add_digest(p.inputs.digests, "sim_config", o.sim_config);
  LookupSet preloaded;
  if (!o.lookup_dir.empty()) {
    preloaded = LookupSet::load_directory(o.lookup_dir);
    for (const auto& [key, table] : preloaded)
      add_digest(p.inputs.digests, "lookup", o.lookup_dir / lookup_file_name(key.first, key.second));
  }
  for (const auto& s : p.scenarios) {
    if (o.sim_config.empty() && !s.lookup_config.empty())
      add_digest(p.inputs.digests, "sim_config", s.lookup_config);
    p.configs.push_back(sim_config_for(o, &s));
    const auto& cfg = p.configs.back();
    auto [it, fresh] = p.lookups.try_emplace(cfg.hash(), preloaded);
    ensure_lookups(it->second, required_lookups(p.inputs.dataset, s), cfg, o.jobs, cache_dir(o));
  }
  return p;
}

Json scenario_json(const PreparedRun& p) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < p.scenarios.size(); ++i)
    arr.push_back({{"name", p.scenarios[i].name},
                   {"hash", p.scenarios[i].hash()},
                   {"sim_config_hash", p.configs[i].hash()}});
  return arr;
}

std::vector<std::pair<std::string, std::string>> result_files(
    std::span<const AggregateReport> reports, bool emit_deciles) {
  auto all = [&](auto writer) {
    return render([&](std::ostream& os) {
      for (std::size_t i = 0; i < reports.size(); ++i) {
        std::ostringstream one;
        writer(one, reports[i]);
        const auto text = one.str();
        // Header only once.
        os << (i == 0 ? text : text.substr(text.find('\n') + 1));
      }
    });
  };
  std::vector<std::pair<std::string, std::string>> files{
      {"results_country.csv", all([](std::ostream& os, const AggregateReport& r) { write_country_results(os, r); })},
      {"results_decile.csv", all([](std::ostream& os, const AggregateReport& r) { write_decile_results(os, r); })},
      {"results_aggregate.csv", all([](std::ostream& os, const AggregateReport& r) { write_aggregate_results(os, r); })}};
  if (emit_deciles)
    files.emplace_back("deciles.csv", render([&](std::ostream& os) {
                         write_deciles_diagnostic(os, reports.front());
                       }));
  return files;
}

std::string notes_csv(std::span<const AggregateReport> reports,
                      const std::vector<std::string>& input_notes) {
  std::ostringstream os;
  os << "scenario,country_iso3,note\n";
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  for (const auto& n : input_notes) os << ",," << quote(n) << '\n';
  for (const auto& r : reports)
    for (const auto& c : r.countries)
      for (const auto& n : c.notes) os << r.scenario_name << ',' << c.country_iso3 << ',' << quote(n) << '\n';
  return os.str();
}

const LookupSet& lookups_for(const PreparedRun& p, std::size_t i) {
  return p.lookups.at(p.configs[i].hash());
}

}  // namespace

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto report = validate_inputs(input_paths(o));
    print_notes(err, report.notes);
    for (const auto& v : report.violations) out << v.describe() << '\n';
    out << report.violations.size() << " violation(s)\n";
    return report.violations.empty() ? kOk : kDomainFailure;
  });
}

int cmd_lookup(const Options& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (o.out_dir.empty()) throw DomainError("--out is required");
    SimConfig cfg = sim_config_for(o, nullptr);
    Json digests = Json::array();
    if (!o.sim_config.empty()) add_digest(digests, "sim_config", o.sim_config);
    std::vector<double> freqs = cfg.frequencies_mhz, rels = cfg.reliabilities_pct;
    if ((freqs.empty() || rels.empty()) && !o.data_dir.empty()) {
      auto in = load(o);
      for (auto& d : in.digests) digests.push_back(std::move(d));
      if (freqs.empty()) freqs = in.dataset.portfolio_frequencies();
      if (rels.empty()) {
        std::set<double> r;
        for (const auto& c : in.dataset.countries) r.insert(c.reliability_pct);
        rels.assign(r.begin(), r.end());
      }
    }
    if (freqs.empty())
      throw DomainError("no frequencies: set frequencies_mhz in the sim config or pass --data");
    if (rels.empty()) rels = {95.0};

    LookupSet set;
    for (auto& t : build_lookups(freqs, rels, cfg, o.jobs)) set.insert(std::move(t));
    std::vector<std::pair<std::string, std::string>> files;
    for (const auto& [key, table] : set)
      files.emplace_back(lookup_file_name(key.first, key.second),
                         render([&](std::ostream& os) { write_lookup_csv(os, table); }));

    io::StagedOutputs staged(o.out_dir);
    Json m = manifest_head("lookup");
    m["inputs"] = std::move(digests);
    m["seed"] = cfg.rng_seed;
    m["sim_config_hash"] = cfg.hash();
    publish(o, staged, files, std::move(m));
    out << "wrote " << files.size() << " lookup table(s) to " << o.out_dir.string() << '\n';
    return kOk;
  });
}

int cmd_run(const Options& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (o.scenarios.size() > 1) throw DomainError("run takes at most one --scenario; use sweep");
    auto p = prepare(o, false);
    print_notes(err, p.inputs.notes);
    std::vector<AggregateReport> reports{
        run_global(p.inputs.dataset, p.scenarios.front(), lookups_for(p, 0), o.jobs)};
    for (const auto& c : reports.front().countries) print_notes(err, c.notes);

    auto files = result_files(reports, o.emit_deciles);
    files.emplace_back("notes.csv", notes_csv(reports, p.inputs.notes));
    io::StagedOutputs staged(o.out_dir);
    Json m = manifest_head("run");
    m["inputs"] = std::move(p.inputs.digests);
    m["scenarios"] = scenario_json(p);
    m["seed"] = p.configs.front().rng_seed;
    publish(o, staged, files, std::move(m));
    out << "scenario " << p.scenarios.front().name << ": global total "
        << format_usd(reports.front().global_total) << " USD over "
        << reports.front().countries.size() << " countries\n";
    return kOk;
  });
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto p = prepare(o, true);
    print_notes(err, p.inputs.notes);
    const std::string baseline = o.baseline.empty() ? p.scenarios.front().name : o.baseline;

    // Scenarios may carry different sim configs, so each runs against its
    // own lookup set before the comparison.
    std::vector<AggregateReport> reports;
    for (std::size_t i = 0; i < p.scenarios.size(); ++i)
      reports.push_back(run_global(p.inputs.dataset, p.scenarios[i], lookups_for(p, i), o.jobs));
    for (const auto& r : reports)
      for (const auto& c : r.countries) print_notes(err, c.notes);
    const auto table = compare(std::move(reports), baseline);

    auto files = result_files(table.reports, o.emit_deciles);
    files.emplace_back("sweep.csv", render([&](std::ostream& os) { write_sweep(os, table); }));
    files.emplace_back("notes.csv", notes_csv(table.reports, p.inputs.notes));
    io::StagedOutputs staged(o.out_dir);
    Json m = manifest_head("sweep");
    m["inputs"] = std::move(p.inputs.digests);
    m["scenarios"] = scenario_json(p);
    m["baseline"] = baseline;
    m["seed"] = p.configs.front().rng_seed;
    publish(o, staged, files, std::move(m));
    for (const auto& r : table.rows)
      if (r.level == "global")
        out << "scenario " << r.scenario << ": global total " << format_usd(r.total_cost)
            << " USD, delta " << format_usd(r.delta_vs_baseline) << '\n';
    return kOk;
  });
}

std::string config_reference() {
  std::ostringstream s;
  s << "\nInput files in --data:\n"
       "  areas.csv      area_id,country_iso3,population,area_km2\n"
       "  countries.csv  country_iso3,income_group(AE|EME|LIDC),region(AE-region|CCA|EDA|EDE|LAC|MENAP|SSA),\n"
       "                 pop_growth_rate_pct_per_year,start_year,end_year,adoption_rate_pct,\n"
       "                 market_share_pct,active_share_pct,total_sites,coverage_2g_pct,coverage_4g_pct,\n"
       "                 fiber_backhaul_share_pct(blank = regional default),\n"
       "                 spectrum_portfolio(freq_mhz:bandwidth_mhz|...),unconnected_users,gdp_usd,\n"
       "                 monthly_data_target_gb,reliability_pct\n"
       "  wages.csv      country_iso3,sector(ICT|logistics|construction),\n"
       "                 hourly_wage_usd(blank = impute),gdp_per_capita_usd\n"
       "  costbook.yaml  see below\n\n"
    << cost_book_keys_help() << '\n'
    << scenario_keys_help() << '\n'
    << sim_config_keys_help() << '\n'
    << "Environment:\n"
       "  UBCOST_CACHE_DIR   lookup cache directory when --cache-dir is not given\n"
       "  UBCOST_ISA         kernel variant: scalar | avx2\n"
       "  SOURCE_DATE_EPOCH  manifest timestamp (otherwise null unless --timestamp)\n\n"
       "Exit status: 0 success, 1 validation/domain failure, 2 I/O failure.\n";
  return s.str();
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ubcost " + std::string(kEngineVersion) +
               ": universal broadband investment estimator"};
  app.require_subcommand(1);
  app.footer(config_reference());
  Options o;
  std::string isa = "auto";
  app.add_option("--isa", isa, "kernel variant: auto, scalar, avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  auto data = [&](CLI::App* c, bool required) {
    auto* opt = c->add_option("--data", o.data_dir, "directory with the input files");
    if (required) opt->required();
    c->add_option("--costbook", o.cost_book, "cost book overriding <data>/costbook.yaml");
  };
  auto physics = [&](CLI::App* c) {
    c->add_option("--seed", o.seed, "Monte Carlo seed (default 42 or the sim config's)");
    c->add_option("--jobs", o.jobs, "worker threads; never changes output")->check(CLI::Range(1u, 1024u));
    c->add_option("--sim-config", o.sim_config, "sim config YAML");
    c->add_option("--out", o.out_dir, "output directory")->required();
    c->add_flag("--timestamp", o.wall_clock_timestamp, "record the wall clock in manifest.json");
  };
  auto running = [&](CLI::App* c) {
    c->add_option("--lookup-dir", o.lookup_dir, "pre-built lookup tables");
    c->add_option("--cache-dir", o.cache_dir, "lookup cache keyed by sim config hash");
    c->add_flag("--emit-deciles", o.emit_deciles, "also write deciles.csv");
  };

  auto* validate = app.add_subcommand("validate", "check input files and list every violation");
  data(validate, true);
  auto* lookup = app.add_subcommand("lookup", "build capacity lookup tables");
  data(lookup, false);
  physics(lookup);
  auto* run = app.add_subcommand("run", "run one scenario (default: 50/50/40 GB at 95%)");
  data(run, true);
  physics(run);
  running(run);
  run->add_option("--scenario", o.scenarios, "scenario YAML")->expected(0, 1);
  auto* sweep_cmd = app.add_subcommand("sweep", "run several scenarios and compare to a baseline");
  data(sweep_cmd, true);
  physics(sweep_cmd);
  running(sweep_cmd);
  sweep_cmd->add_option("--scenario", o.scenarios, "scenario YAML (repeat, at least two)")->required();
  sweep_cmd->add_option("--baseline", o.baseline, "baseline scenario name (default: first)");
  for (auto* c : {validate, lookup, run, sweep_cmd}) c->footer(config_reference());

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kDomainFailure;
  }

  if (isa != "auto") {
    try {
      kernels::override_isa(kernels::parse_isa(isa));
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kDomainFailure;
    }
  }
  if (*validate) return cmd_validate(o, out, err);
  if (*lookup) return cmd_lookup(o, out, err);
  if (*run) return cmd_run(o, out, err);
  return cmd_sweep(o, out, err);
}

}  // namespace ubcost::cli
