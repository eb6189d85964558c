#pragma once

#include <algorithm>
#include <fstream>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "npi/certify.hpp"
#include "npi/complex.hpp"
#include "npi/presentations.hpp"
#include "oracles.hpp"

namespace testing {

using npi::CellIndex;
using npi::CellMap;
using npi::SignedEdge;
using npi::TwoComplex;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string chi2_piece_document() {
  return read_file(std::string(NPI_FIXTURE_DIR) + "/chi2_piece.npicert.json");
}

inline CellMap chi2_piece() { return npi::deserialize(chi2_piece_document()); }

inline std::shared_ptr<const TwoComplex> ms(int n, const char* word) {
  return std::make_shared<const TwoComplex>(
      npi::miller_schupp(n, npi::Word::parse(word)));
}

// Small target with short relators, so random maps stay within a dozen cells.
inline std::shared_ptr<const TwoComplex> small_target() {
  npi::Presentation p;
  p.relators = {npi::Word::parse("ab"), npi::Word::parse("aaB"),
                npi::Word::parse("b")};
  return std::make_shared<const TwoComplex>(npi::presentation_complex(p));
}

// Random connected map into `target` with at most `max_cells` cells: discs
// over short faces wedged together, extra edges lifted from the target, and
// a few identifications of vertices with equal image. Many of the results
// are not immersions.
inline CellMap random_map(std::mt19937_64& rng,
                          std::shared_ptr<const TwoComplex> target,
                          std::size_t max_cells = 12) {
  auto pick = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  oracle::Raw r;
  r.target = target;
  auto cells = [&] { return r.vimg.size() + r.edges.size() + r.faces.size(); };

  std::vector<CellIndex> short_faces;
  for (CellIndex f = 0; f < target->face_count(); ++f)
    if (target->face(f).boundary.size() <= 4) short_faces.push_back(f);

  auto add_disc = [&](CellIndex f) -> CellIndex {
    const auto& b = target->face(f).boundary;
    CellIndex first = static_cast<CellIndex>(r.vimg.size());
    for (auto s : b) r.vimg.push_back(target->origin(s));
    oracle::Raw::F face{f, {}};
    for (std::size_t i = 0; i < b.size(); ++i) {
      CellIndex from = first + static_cast<CellIndex>(i);
      CellIndex to = first + static_cast<CellIndex>((i + 1) % b.size());
      CellIndex e = static_cast<CellIndex>(r.edges.size());
      if (b[i].reversed)
        r.edges.push_back({to, from, b[i].inverse().label()});
      else
        r.edges.push_back({from, to, b[i].label()});
      face.over.push_back({e, b[i].reversed});
    }
    r.faces.push_back(std::move(face));
    return first;
  };

  auto merge = [&](CellIndex keep, CellIndex gone) {
    if (keep == gone) return;
    if (gone < keep) std::swap(keep, gone);
    oracle::detail::merge_vertices(r, keep, gone);
  };

  if (!short_faces.empty() && rng() % 4 != 0)
    add_disc(short_faces[pick(short_faces.size())]);
  else
    r.vimg.push_back(static_cast<CellIndex>(pick(target->vertex_count())));

  const std::size_t steps = 1 + pick(5);
  for (std::size_t step = 0; step < steps; ++step) {
    std::size_t kind = pick(3);
    if (kind == 0 && !short_faces.empty()) {
      CellIndex f = short_faces[pick(short_faces.size())];
      std::size_t len = target->face(f).boundary.size();
      if (cells() + 2 * len + 1 > max_cells) continue;
      CellIndex old = static_cast<CellIndex>(pick(r.vimg.size()));
      CellIndex first = add_disc(f);
      // glue one disc vertex with equal image onto the old part
      std::vector<CellIndex> options;
      for (std::size_t i = 0; i < len; ++i)
        if (r.vimg[first + i] == r.vimg[old]) options.push_back(first + i);
      if (options.empty()) {
        // fall back: glue to any old vertex of the right image
        for (CellIndex v = 0; v < first; ++v)
          if (r.vimg[v] == r.vimg[first]) options.push_back(v);
        if (options.empty()) {
          r.vimg.resize(first);
          r.edges.resize(r.edges.size() - len);
          r.faces.pop_back();
          continue;
        }
        merge(options[pick(options.size())], first);
      } else {
        merge(old, options[pick(options.size())]);
      }
    } else if (kind == 1) {
      if (cells() + 2 > max_cells) continue;
      CellIndex v = static_cast<CellIndex>(pick(r.vimg.size()));
      auto outs = target->outgoing(r.vimg[v]);
      if (outs.empty()) continue;
      SignedEdge s = outs[pick(outs.size())];
      CellIndex end_image = target->terminus(s);
      CellIndex w;
      std::vector<CellIndex> same;
      for (CellIndex u = 0; u < r.vimg.size(); ++u)
        if (r.vimg[u] == end_image) same.push_back(u);
      if (!same.empty() && rng() % 2 == 0) {
        w = same[pick(same.size())];
      } else {
        w = static_cast<CellIndex>(r.vimg.size());
        r.vimg.push_back(end_image);
      }
      if (s.reversed)
        r.edges.push_back({w, v, s.inverse().label()});
      else
        r.edges.push_back({v, w, s.label()});
    } else {
      CellIndex v = static_cast<CellIndex>(pick(r.vimg.size()));
      std::vector<CellIndex> same;
      for (CellIndex u = 0; u < r.vimg.size(); ++u)
        if (u != v && r.vimg[u] == r.vimg[v]) same.push_back(u);
      if (!same.empty()) merge(v, same[pick(same.size())]);
    }
  }
  return oracle::from_raw(r);
}

// The same map with every cell renamed and reindexed, edges possibly
// reversed, and face boundaries rotated and possibly reflected.
inline CellMap random_relabel(const CellMap& m, std::mt19937_64& rng) {
  const TwoComplex& d = *m.domain;
  auto perm = [&](std::size_t n) {
    std::vector<CellIndex> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
  };
  auto vp = perm(d.vertex_count()), ep = perm(d.edge_count()),
       fp = perm(d.face_count());
  std::vector<bool> flip(d.edge_count());
  for (auto&& f : flip) f = rng() % 2;
  std::vector<CellIndex> vinv(vp.size()), einv(ep.size()), finv(fp.size());
  for (CellIndex i = 0; i < vp.size(); ++i) vinv[vp[i]] = i;
  for (CellIndex i = 0; i < ep.size(); ++i) einv[ep[i]] = i;
  for (CellIndex i = 0; i < fp.size(); ++i) finv[fp[i]] = i;

  auto c = std::make_shared<TwoComplex>();
  CellMap out;
  out.codomain = m.codomain;
  const std::string tag = std::to_string(rng() % 1000);
  for (CellIndex i = 0; i < vp.size(); ++i) {
    c->add_vertex("p" + tag + "_" + std::to_string(vp.size() - i));
    out.vertex_map.push_back(m.vertex_map[vinv[i]]);
  }
  for (CellIndex i = 0; i < ep.size(); ++i) {
    CellIndex e = einv[i];
    const auto& edge = d.edge(e);
    CellIndex from = vp[edge.from], to = vp[edge.to];
    SignedEdge img = m.edge_map[e];
    if (flip[e]) {
      std::swap(from, to);
      img = img.inverse();
    }
    c->add_edge("q" + tag + "_" + std::to_string(i), from, to);
    out.edge_map.push_back(img);
  }
  auto rename = [&](SignedEdge s) {
    return SignedEdge{ep[s.edge], s.reversed != flip[s.edge]};
  };
  for (CellIndex i = 0; i < fp.size(); ++i) {
    CellIndex f = finv[i];
    const auto& b = d.face(f).boundary;
    const std::size_t L = b.size();
    std::size_t k = rng() % L;
    bool reflect = rng() % 2;
    std::vector<SignedEdge> nb(L);
    for (std::size_t j = 0; j < L; ++j) {
      if (reflect)
        nb[j] = rename(b[(k + L - j) % L]).inverse();
      else
        nb[j] = rename(b[(k + j) % L]);
    }
    c->add_face("r" + tag + "_" + std::to_string(i), nb);
    npi::FaceImage found{m.face_map[f].face, 0, 1};
    bool ok = false;
    for (int o : {1, -1}) {
      for (std::uint32_t rot = 0; rot < L && !ok; ++rot) {
        npi::FaceImage img{m.face_map[f].face, rot, o};
        bool all = true;
        for (std::size_t j = 0; j < L && all; ++j) {
          SignedEdge im = out.edge_map[nb[j].edge];
          if (nb[j].reversed) im = im.inverse();
          all = im == npi::expected_boundary_image(*m.codomain, img, j);
        }
        if (all) {
          found = img;
          ok = true;
        }
      }
      if (ok) break;
    }
    out.face_map.push_back(found);
  }
  out.domain = std::move(c);
  return out;
}

}  // namespace testing
