#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <cstring>
#include <sstream>

#include "npi/certify.hpp"
#include "npi/folding.hpp"
#include "npi/forest.hpp"
#include "npi/npi.h"
#include "npi/presentations.hpp"

struct npi_complex {
  std::shared_ptr<const npi::TwoComplex> complex;
};

struct npi_map {
  npi::CellMap map;
};

struct npi_search_report {
  npi::SearchReport report;
  npi::SearchBudget budget;
  npi::SearchTarget target;
};

namespace {

thread_local std::string last_error;
std::atomic<bool> interrupt_flag{false};

npi_status status_for(npi::ErrorCode code) {
  switch (code) {
    case npi::ErrorCode::invalid_argument: return NPI_ERR_INVALID_ARGUMENT;
    case npi::ErrorCode::parse_error: return NPI_ERR_PARSE;
    case npi::ErrorCode::unsupported_format: return NPI_ERR_UNSUPPORTED_FORMAT;
    case npi::ErrorCode::dangling_reference: return NPI_ERR_DANGLING_REFERENCE;
    case npi::ErrorCode::not_immersion: return NPI_ERR_NOT_IMMERSION;
    case npi::ErrorCode::disconnected: return NPI_ERR_DISCONNECTED;
    case npi::ErrorCode::io_error: return NPI_ERR_IO;
  }
  return NPI_ERR_INTERNAL;
}

// Runs body, translating exceptions into status codes.
template <typename F>
npi_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return NPI_OK;
  } catch (const npi::Error& e) {
    last_error = e.what();
    return status_for(e.code());
  } catch (const std::exception& e) {
    last_error = e.what();
    return NPI_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return NPI_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw npi::Error(npi::ErrorCode::invalid_argument, what);
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

npi_complex_info describe(const npi::TwoComplex& c) {
  auto report = npi::validate_complex(c);
  if (!report.ok())
    throw npi::Error(npi::ErrorCode::invalid_argument,
                     "invalid complex\n" + report.to_string());
  npi_complex_info info{};
  info.vertices = c.vertex_count();
  info.edges = c.edge_count();
  info.faces = c.face_count();
  info.euler = npi::euler_characteristic(c);
  info.connected = npi::is_connected(c) ? 1 : 0;
  info.free_edges = npi::free_edges(c).size();
  info.isolated_edges = npi::isolated_edges(c).size();
  return info;
}

}  // namespace

extern "C" {

const char* npi_version(void) { return "0.1.0"; }

const char* npi_last_error(void) { return last_error.c_str(); }

const char* npi_status_name(npi_status status) {
  switch (status) {
    case NPI_OK: return "ok";
    case NPI_ERR_INVALID_ARGUMENT: return "invalid argument";
    case NPI_ERR_PARSE: return "parse error";
    case NPI_ERR_UNSUPPORTED_FORMAT: return "unsupported format";
    case NPI_ERR_DANGLING_REFERENCE: return "dangling reference";
    case NPI_ERR_NOT_IMMERSION: return "not an immersion";
    case NPI_ERR_DISCONNECTED: return "disconnected";
    case NPI_ERR_IO: return "i/o error";
    case NPI_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void npi_string_free(char* s) { std::free(s); }

npi_status npi_complex_miller_schupp(int n, const char* word,
                                     npi_complex** out) {
  return guarded([&] {
    require(word && out, "null argument");
    auto c = npi::miller_schupp(n, npi::Word::parse(word));
    *out = new npi_complex{std::make_shared<const npi::TwoComplex>(std::move(c))};
  });
}

npi_status npi_complex_presentation(size_t generators,
                                    const char* const* relators,
                                    size_t relator_count, npi_complex** out) {
  return guarded([&] {
    require(out && (relators || relator_count == 0), "null argument");
    require(generators <= 26, "at most 26 generators");
    npi::Presentation p;
    p.generators = generators;
    for (size_t i = 0; i < relator_count; ++i) {
      require(relators[i] != nullptr, "null relator");
      p.relators.push_back(npi::Word::parse(relators[i]));
    }
    auto c = npi::presentation_complex(p);
    *out = new npi_complex{std::make_shared<const npi::TwoComplex>(std::move(c))};
  });
}

npi_status npi_complex_from_json(const char* json, npi_complex** out) {
  return guarded([&] {
    require(json && out, "null argument");
    auto c = npi::complex_from_json(json);
    auto report = npi::validate_complex(c);
    if (!report.ok())
      throw npi::Error(npi::ErrorCode::invalid_argument,
                       "invalid complex\n" + report.to_string());
    *out = new npi_complex{std::make_shared<const npi::TwoComplex>(std::move(c))};
  });
}

npi_status npi_complex_to_json(const npi_complex* c, char** out) {
  return guarded([&] {
    require(c && out, "null argument");
    *out = copy_string(npi::complex_to_json(*c->complex));
  });
}

void npi_complex_free(npi_complex* c) { delete c; }

npi_status npi_complex_describe(const npi_complex* c, npi_complex_info* out) {
  return guarded([&] {
    require(c && out, "null argument");
    *out = describe(*c->complex);
  });
}

npi_status npi_map_from_document(const char* document, npi_map** out) {
  return guarded([&] {
    require(document && out, "null argument");
    *out = new npi_map{npi::deserialize(document)};
  });
}

npi_status npi_map_to_certificate(const npi_map* m, char** out) {
  return guarded([&] {
    require(m && out, "null argument");
    *out = copy_string(npi::serialize(m->map));
  });
}

void npi_map_free(npi_map* m) { delete m; }

npi_status npi_map_describe(const npi_map* m, npi_complex_info* out) {
  return guarded([&] {
    require(m && out, "null argument");
    *out = describe(*m->map.domain);
  });
}

npi_status npi_map_is_immersion(const npi_map* m, int* out) {
  return guarded([&] {
    require(m && out, "null argument");
    *out = npi::is_immersion(m->map) ? 1 : 0;
  });
}

npi_status npi_map_canonical_key(const npi_map* m, char** out) {
  return guarded([&] {
    require(m && out, "null argument");
    *out = copy_string(npi::canonical_key(m->map).hex());
  });
}

npi_status npi_fold(const npi_map* m, npi_map** folded, npi_fold_stats* stats) {
  return guarded([&] {
    require(m && folded, "null argument");
    auto result = npi::fold(m->map);
    if (stats) {
      stats->vertex_merges = result.vertex_merge_count;
      stats->edge_folds = result.edge_fold_count;
      stats->face_merges = result.face_merge_count;
    }
    *folded = new npi_map{std::move(result.folded)};
  });
}

npi_status npi_wnpi_to_npi(const npi_map* m, const char* vertex_id,
                           npi_map** out) {
  return guarded([&] {
    require(m && out, "null argument");
    const auto& dom = *m->map.domain;
    require(dom.vertex_count() > 0, "source has no vertices");
    npi::CellIndex v = 0;
    if (vertex_id) {
      auto found = dom.find_vertex(vertex_id);
      require(found.has_value(), "unknown source vertex");
      v = *found;
    } else {
      for (npi::CellIndex i = 1; i < dom.vertex_count(); ++i)
        if (npi::canonical_id_less(dom.vertex_id(i), dom.vertex_id(v))) v = i;
    }
    *out = new npi_map{npi::wnpi_to_npi(m->map, v)};
  });
}

npi_status npi_verify(const char* document, int* passed, char** report) {
  return guarded([&] {
    require(document && passed, "null argument");
    auto r = npi::verify(document);
    *passed = r.passed() ? 1 : 0;
    if (report) *report = copy_string(r.to_string());
  });
}

npi_status npi_normalize_word(const char* word, char** out) {
  return guarded([&] {
    require(word && out, "null argument");
    *out = copy_string(npi::normalize_word(npi::Word::parse(word)).to_string());
  });
}

npi_status npi_enumerate_words(size_t max_len, char** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    std::string text;
    for (const auto& w : npi::enumerate_words(max_len))
      text += w.to_string() + "\n";
    *out = copy_string(text);
  });
}

void npi_search_config_init(npi_search_config* config) {
  if (!config) return;
  npi::SearchBudget budget;
  npi::SearchTarget target;
  config->max_depth = budget.max_depth;
  config->max_nodes = budget.max_nodes;
  config->max_seconds = budget.max_seconds;
  config->min_euler = target.min_euler;
  config->require_no_free_edges = 0;
  config->stop_on_first = 0;
  config->workers = 1;
  config->deterministic = 1;
}

npi_status npi_search(const npi_complex* target,
                      const npi_search_config* config, npi_hit_fn on_hit,
                      npi_progress_fn on_progress, void* user,
                      npi_search_report** out) {
  return guarded([&] {
    require(target && config && out, "null argument");
    require(config->workers >= 1, "workers must be >= 1");
    auto result = std::make_unique<npi_search_report>();
    result->budget = {config->max_depth, config->max_nodes, config->max_seconds};
    result->target = {config->min_euler, config->require_no_free_edges != 0,
                      config->stop_on_first != 0};
    npi::SearchOptions options;
    options.workers = config->workers;
    options.deterministic = config->deterministic != 0;
    options.cancel = &interrupt_flag;
    if (on_hit) {
      options.on_hit = [&](const npi::ForestNode& node) {
        auto doc = npi::serialize(node.immersion);
        on_hit(user, npi::hit_file_name(node).c_str(), doc.c_str(), node.depth,
               node.euler);
      };
    }
    if (on_progress) {
      options.on_depth = [&](const npi::DepthStats& d,
                             const npi::SearchReport& r) {
        std::ostringstream line;
        line << "depth=" << d.depth << " nodes=" << d.nodes
             << " max_chi=" << d.max_euler << " hits=" << d.hits
             << " complete=" << (d.complete ? 1 : 0)
             << " total_nodes=" << r.total_nodes
             << " dedup_hits=" << r.dedup_hits << " elapsed=" << r.elapsed_seconds;
        on_progress(user, line.str().c_str());
      };
    }
    result->report =
        npi::search(target->complex, result->budget, result->target, options);
    *out = result.release();
  });
}

void npi_search_interrupt(void) { interrupt_flag.store(true); }
void npi_search_clear_interrupt(void) { interrupt_flag.store(false); }

size_t npi_report_hit_count(const npi_search_report* r) {
  return r ? r->report.hits.size() : 0;
}

size_t npi_report_depth_count(const npi_search_report* r) {
  return r ? r->report.depths.size() : 0;
}

npi_status npi_report_depth(const npi_search_report* r, size_t depth,
                            size_t* nodes, int64_t* max_euler, int* complete) {
  return guarded([&] {
    require(r != nullptr, "null argument");
    require(depth < r->report.depths.size(), "depth out of range");
    const auto& d = r->report.depths[depth];
    if (nodes) *nodes = d.nodes;
    if (max_euler) *max_euler = d.max_euler;
    if (complete) *complete = d.complete ? 1 : 0;
  });
}

int npi_report_budget_exhausted(const npi_search_report* r) {
  return r && r->report.budget_exhausted() ? 1 : 0;
}

npi_status npi_report_index(const npi_search_report* r, const char* input,
                            const char* word, int n, char** out) {
  return guarded([&] {
    require(r && out, "null argument");
    npi::IndexMeta meta;
    meta.input = input ? input : "";
    if (word) {
      meta.word = word;
      meta.n = n;
    }
    *out = copy_string(npi::index_document(r->report, meta, r->budget, r->target));
  });
}

void npi_report_free(npi_search_report* r) { delete r; }

}  // extern "C"
