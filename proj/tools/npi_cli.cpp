// Command-line front end. Talks to the library only through npi.h.

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "npi/npi.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitBudget = 2;

struct Failure {
  std::string message;
};

void check(npi_status s, const std::string& what) {
  if (s != NPI_OK)
    throw Failure{what + ": " + npi_status_name(s) + ": " + npi_last_error()};
}

// Owns a char* returned by the library.
struct LibString {
  char* p = nullptr;
  ~LibString() { npi_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{"cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{"cannot write " + path.string()};
  out << text;
  if (!out) throw Failure{"cannot write " + path.string()};
}

// "n=1,w=abbaB" -> key/value pairs
std::vector<std::pair<std::string, std::string>> parse_pairs(
    const std::string& spec) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw Failure{"expected key=value in '" + spec + "'"};
    out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return out;
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Failure{"invalid " + what + " '" + s + "'"};
  }
}

void on_sigint(int) { npi_search_interrupt(); }

struct SearchFlags {
  std::string ms;
  std::string complex_file;
  std::string sweep;
  int n = 1;
  std::int64_t min_chi = 2;
  bool no_free = false;
  bool stop_on_first = false;
  std::size_t max_depth = 8;
  std::size_t max_nodes = 1'000'000;
  double max_seconds = 0;
  std::string out;
  std::size_t workers = 1;
  bool deterministic = false;
  bool quiet = false;
};

std::string default_output_dir() {
  if (const char* env = std::getenv("NPI_OUTPUT_DIR"); env && *env) return env;
  return "npi-out";
}

struct HitSink {
  fs::path dir;
  std::size_t written = 0;
  std::string error;
};

void hit_callback(void* user, const char* file_name, const char* certificate,
                  size_t, int64_t) {
  auto* sink = static_cast<HitSink*>(user);
  std::ofstream out(sink->dir / file_name, std::ios::binary);
  out << certificate;
  if (!out) sink->error = "cannot write " + (sink->dir / file_name).string();
  ++sink->written;
}

void progress_callback(void*, const char* line) {
  std::cerr << line << "\n";
}

struct SearchOutcome {
  bool budget_exhausted = false;
  std::size_t hits = 0;
};

// One search: writes hit certificates and index.json into dir.
SearchOutcome search_one(const npi_complex* x, const SearchFlags& f,
                         const fs::path& dir, const std::string& input,
                         const char* word, int n) {
  fs::create_directories(dir);
  npi_search_config config;
  npi_search_config_init(&config);
  config.max_depth = f.max_depth;
  config.max_nodes = f.max_nodes;
  config.max_seconds = f.max_seconds;
  config.min_euler = f.min_chi;
  config.require_no_free_edges = f.no_free ? 1 : 0;
  config.stop_on_first = f.stop_on_first ? 1 : 0;
  config.workers = f.workers;
  config.deterministic = f.deterministic ? 1 : 0;

  HitSink sink{dir};
  npi_search_report* report = nullptr;
  check(npi_search(x, &config, hit_callback,
                   f.quiet ? nullptr : progress_callback, &sink, &report),
        "search");
  LibString index;
  npi_status s = npi_report_index(report, input.c_str(), word, n, &index.p);
  SearchOutcome outcome;
  outcome.budget_exhausted = npi_report_budget_exhausted(report) != 0;
  outcome.hits = npi_report_hit_count(report);
  npi_report_free(report);
  check(s, "index");
  if (!sink.error.empty()) throw Failure{sink.error};
  write_file(dir / "index.json", index.str());
  return outcome;
}

int run_search(const SearchFlags& f) {
  if (f.workers < 1) throw Failure{"--workers must be >= 1"};
  const fs::path out = f.out.empty() ? default_output_dir() : f.out;

  if (!f.sweep.empty()) {
    std::optional<std::size_t> max_len;
    for (auto& [k, v] : parse_pairs(f.sweep)) {
      if (k == "max_len") max_len = static_cast<std::size_t>(parse_int(v, k));
      else throw Failure{"unknown sweep key '" + k + "'"};
    }
    if (!max_len || *max_len < 1) throw Failure{"--sweep needs max_len >= 1"};
    int n = f.n;
    if (!f.ms.empty())
      for (auto& [k, v] : parse_pairs(f.ms)) {
        if (k == "n") n = parse_int(v, "n");
        else throw Failure{"--ms in sweep mode takes only n"};
      }
    LibString words;
    check(npi_enumerate_words(*max_len, &words.p), "enumerate");
    std::stringstream ss(words.str());
    std::string w;
    bool exhausted = false;
    std::size_t total_hits = 0, count = 0;
    while (std::getline(ss, w)) {
      npi_complex* x = nullptr;
      check(npi_complex_miller_schupp(n, w.c_str(), &x), "word " + w);
      std::string input = "ms n=" + std::to_string(n) + " w=" + w;
      SearchOutcome o;
      try {
        o = search_one(x, f, out / ("n" + std::to_string(n) + "-" + w), input,
                       w.c_str(), n);
      } catch (...) {
        npi_complex_free(x);
        throw;
      }
      npi_complex_free(x);
      exhausted = exhausted || o.budget_exhausted;
      total_hits += o.hits;
      ++count;
      std::cout << "word=" << w << " n=" << n << " hits=" << o.hits
                << " complete=" << (o.budget_exhausted ? 0 : 1) << "\n";
    }
    std::cout << "words=" << count << " hits=" << total_hits
              << " out=" << out.string() << "\n";
    return exhausted ? kExitBudget : kExitOk;
  }

  if (f.ms.empty() == f.complex_file.empty())
    throw Failure{"give exactly one of --ms or --complex"};
  npi_complex* x = nullptr;
  std::string input;
  std::string word;
  int n = 0;
  if (!f.ms.empty()) {
    std::optional<int> n_opt;
    std::optional<std::string> w_opt;
    for (auto& [k, v] : parse_pairs(f.ms)) {
      if (k == "n") n_opt = parse_int(v, "n");
      else if (k == "w") w_opt = v;
      else throw Failure{"unknown --ms key '" + k + "'"};
    }
    if (!n_opt || !w_opt) throw Failure{"--ms needs n=<int>,w=<word>"};
    n = *n_opt;
    word = *w_opt;
    check(npi_complex_miller_schupp(n, word.c_str(), &x), "presentation");
    input = "ms n=" + std::to_string(n) + " w=" + word;
  } else {
    check(npi_complex_from_json(read_file(f.complex_file).c_str(), &x),
          f.complex_file);
    input = f.complex_file;
  }
  SearchOutcome o;
  try {
    o = search_one(x, f, out, input, word.empty() ? nullptr : word.c_str(), n);
  } catch (...) {
    npi_complex_free(x);
    throw;
  }
  npi_complex_free(x);
  std::cout << "hits=" << o.hits << " complete=" << (o.budget_exhausted ? 0 : 1)
            << " index=" << (out / "index.json").string() << "\n";
  return o.budget_exhausted ? kExitBudget : kExitOk;
}

int run_verify(const std::vector<std::string>& paths) {
  if (paths.empty()) {
    std::cerr << "usage: npi verify FILE...\n";
    return kExitFailure;
  }
  bool all = true;
  for (const auto& path : paths) {
    std::string doc;
    try {
      doc = read_file(path);
    } catch (const Failure& e) {
      std::cout << path << ": FAIL\n  " << e.message << "\n";
      all = false;
      continue;
    }
    int passed = 0;
    LibString report;
    check(npi_verify(doc.c_str(), &passed, &report.p), path);
    std::cout << path << ": " << (passed ? "PASS" : "FAIL") << "\n";
    std::stringstream ss(report.str());
    for (std::string line; std::getline(ss, line);) std::cout << "  " << line << "\n";
    all = all && passed;
  }
  return all ? kExitOk : kExitFailure;
}

int run_enumerate(int max_len) {
  if (max_len < 1) throw Failure{"--max-len must be >= 1"};
  LibString words;
  check(npi_enumerate_words(static_cast<std::size_t>(max_len), &words.p),
        "enumerate");
  std::cout << words.str();
  return kExitOk;
}

int run_fold(const std::string& input, const std::string& output) {
  npi_map* m = nullptr;
  check(npi_map_from_document(read_file(input).c_str(), &m), input);
  npi_map* folded = nullptr;
  npi_fold_stats stats{};
  npi_status s = npi_fold(m, &folded, &stats);
  npi_map_free(m);
  check(s, "fold");
  LibString cert;
  s = npi_map_to_certificate(folded, &cert.p);
  npi_map_free(folded);
  check(s, "certificate");
  std::ostringstream line;
  line << "vertex_merges=" << stats.vertex_merges
       << " edge_folds=" << stats.edge_folds
       << " face_merges=" << stats.face_merges << "\n";
  if (output.empty()) {
    std::cout << cert.str();
    std::cerr << line.str();
  } else {
    write_file(output, cert.str());
    std::cout << line.str();
  }
  return kExitOk;
}

void add_search_flags(CLI::App* cmd, SearchFlags& f) {
  cmd->add_option("--min-chi", f.min_chi, "Hit predicate: euler >= value")
      ->capture_default_str();
  cmd->add_flag("--require-no-free-edges", f.no_free,
                "Hits must have no free edges");
  cmd->add_flag("--stop-on-first", f.stop_on_first, "Stop at the first hit");
  cmd->add_option("--max-depth", f.max_depth)->capture_default_str();
  cmd->add_option("--max-nodes", f.max_nodes, "0 means unlimited")
      ->capture_default_str();
  cmd->add_option("--max-seconds", f.max_seconds, "0 means unlimited")
      ->capture_default_str();
  cmd->add_option("--out", f.out,
                  "Output directory (default $NPI_OUTPUT_DIR or npi-out)");
  cmd->add_option("--workers", f.workers)->capture_default_str();
  cmd->add_flag("--deterministic", f.deterministic,
                "Single worker, key-ordered expansion");
  cmd->add_flag("--quiet", f.quiet, "No progress lines");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Folding and facial-piece search for 2-complexes"};
  app.require_subcommand(1);

  SearchFlags sf;
  auto* search = app.add_subcommand("search", "Breadth-first forest search");
  search->add_option("--ms", sf.ms, "Miller-Schupp input, e.g. n=1,w=abbaB");
  search->add_option("--complex", sf.complex_file, "Target complex JSON file");
  search->add_option("--sweep", sf.sweep, "Sweep all words, e.g. max_len=6");
  add_search_flags(search, sf);

  SearchFlags wf;
  int sweep_len = 6;
  auto* sweep = app.add_subcommand("sweep", "Search every enumerated word");
  sweep->add_option("--max-len", sweep_len)->capture_default_str();
  sweep->add_option("--n", wf.n)->capture_default_str();
  add_search_flags(sweep, wf);

  std::vector<std::string> verify_paths;
  auto* verify = app.add_subcommand("verify", "Check certificates");
  verify->add_option("paths", verify_paths, "Certificate files");

  int max_len = 0;
  auto* enumerate = app.add_subcommand("enumerate", "List candidate words");
  enumerate->add_option("--max-len", max_len)->required();

  std::string fold_in, fold_out;
  auto* fold = app.add_subcommand("fold", "Fold a map document");
  fold->add_option("input", fold_in)->required();
  fold->add_option("-o,--output", fold_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitFailure;
  }

  std::signal(SIGINT, on_sigint);
  try {
    if (*search) return run_search(sf);
    if (*sweep) {
      wf.sweep = "max_len=" + std::to_string(sweep_len);
      return run_search(wf);
    }
    if (*verify) return run_verify(verify_paths);
    if (*enumerate) return run_enumerate(max_len);
    if (*fold) return run_fold(fold_in, fold_out);
  } catch (const Failure& e) {
    std::cerr << "error: " << e.message << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
