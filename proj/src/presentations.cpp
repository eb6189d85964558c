#include "npi/presentations.hpp"

#include <algorithm>
#include <set>

namespace npi {

char Letter::to_char() const {
  char c = static_cast<char>('a' + generator);
  return inverse ? static_cast<char>(c - 'a' + 'A') : c;
}

Word::Word(std::vector<Letter> letters) {
  for (Letter l : letters) {
    if (!letters_.empty() && letters_.back() == l.inverted())
      letters_.pop_back();
    else
      letters_.push_back(l);
  }
}

Word Word::parse(std::string_view text) {
  std::vector<Letter> letters;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c >= 'a' && c <= 'z')
      letters.push_back({static_cast<std::uint8_t>(c - 'a'), false});
    else if (c >= 'A' && c <= 'Z')
      letters.push_back({static_cast<std::uint8_t>(c - 'A'), true});
    else
      throw Error(ErrorCode::parse_error,
                  "invalid letter '" + std::string(1, c) + "' at position " +
                      std::to_string(i) + " in word \"" + std::string(text) +
                      "\"");
  }
  return Word(std::move(letters));
}

std::string Word::to_string() const {
  std::string out;
  for (Letter l : letters_) out.push_back(l.to_char());
  return out;
}

Word Word::inverse() const {
  std::vector<Letter> out(letters_.rbegin(), letters_.rend());
  for (auto& l : out) l = l.inverted();
  return Word(std::move(out));
}

Word Word::rotated(std::size_t k) const {
  if (letters_.empty()) return *this;
  std::vector<Letter> out(letters_);
  std::rotate(out.begin(), out.begin() + (k % out.size()), out.end());
  return Word(std::move(out));
}

bool Word::is_cyclically_reduced() const {
  return letters_.size() < 2 || letters_.front() != letters_.back().inverted();
}

Word Word::cyclically_reduced() const {
  std::size_t lo = 0, hi = letters_.size();
  while (hi - lo >= 2 && letters_[lo] == letters_[hi - 1].inverted()) {
    ++lo;
    --hi;
  }
  Word out;
  out.letters_.assign(letters_.begin() + lo, letters_.begin() + hi);
  return out;
}

TwoComplex presentation_complex(const Presentation& p,
                                std::vector<std::string>* warnings) {
  TwoComplex c;
  CellIndex v = c.add_vertex("v");
  for (std::size_t g = 0; g < p.generators; ++g)
    c.add_edge(std::string(1, static_cast<char>('a' + g)), v, v);
  for (std::size_t i = 0; i < p.relators.size(); ++i) {
    Word r = p.relators[i].cyclically_reduced();
    if (r.empty())
      throw Error(ErrorCode::invalid_argument,
                  "relator " + std::to_string(i) + " is trivial");
    if (r != p.relators[i] && warnings)
      warnings->push_back("relator " + p.relators[i].to_string() +
                          " cyclically reduced to " + r.to_string());
    std::vector<SignedEdge> boundary;
    for (Letter l : r.letters()) {
      if (l.generator >= p.generators)
        throw Error(ErrorCode::invalid_argument,
                    "relator " + r.to_string() + " uses an unknown generator");
      boundary.push_back({l.generator, l.inverse});
    }
    c.add_face("r" + std::to_string(i), std::move(boundary));
  }
  return c;
}

Word miller_schupp_relator(int n) {
  std::vector<Letter> letters;
  letters.push_back({1, false});
  for (int i = 0; i < n; ++i) letters.push_back({0, false});
  letters.push_back({1, true});
  for (int i = 0; i < n + 1; ++i) letters.push_back({0, true});
  return Word(std::move(letters));
}

TwoComplex miller_schupp(int n, const Word& w,
                         std::vector<std::string>* warnings) {
  if (n < 1)
    throw Error(ErrorCode::invalid_argument, "miller_schupp: n must be >= 1");
  for (Letter l : w.letters())
    if (l.generator > 1)
      throw Error(ErrorCode::invalid_argument,
                  "miller_schupp: word must be over a and b");
  if (exponent_sum(w, 1) != 1)
    throw Error(ErrorCode::invalid_argument,
                "miller_schupp: exponent sum of b in " + w.to_string() +
                    " is " + std::to_string(exponent_sum(w, 1)) +
                    ", expected 1");
  return presentation_complex({2, {w, miller_schupp_relator(n)}}, warnings);
}

std::int64_t exponent_sum(const Word& w, std::uint8_t generator) {
  std::int64_t sum = 0;
  for (Letter l : w.letters())
    if (l.generator == generator) sum += l.inverse ? -1 : 1;
  return sum;
}

Word least_rotation(const Word& w) {
  Word r = w.cyclically_reduced();
  Word best = r;
  for (std::size_t k = 1; k < r.size(); ++k)
    best = std::min(best, r.rotated(k));
  return best;
}

Word normalize_word(const Word& w) {
  return std::min(least_rotation(w), least_rotation(w.inverse()));
}

std::vector<Word> enumerate_words(std::size_t max_len) {
  if (max_len < 1)
    throw Error(ErrorCode::invalid_argument,
                "enumerate_words: max_len must be >= 1");
  static constexpr Letter kLetters[] = {{0, false}, {0, true}, {1, false},
                                        {1, true}};
  std::set<Word> classes;
  std::vector<Word> out;
  std::vector<Letter> current;
  // Depth-first over freely reduced words; letters only ever append.
  auto visit = [&](auto&& self) -> void {
    if (!current.empty()) {
      Word w(current);
      if (w.is_cyclically_reduced() && exponent_sum(w, 1) == 1 &&
          classes.insert(normalize_word(w)).second)
        out.push_back(least_rotation(w));
    }
    if (current.size() == max_len) return;
    for (Letter l : kLetters) {
      if (!current.empty() && current.back() == l.inverted()) continue;
      current.push_back(l);
      self(self);
      current.pop_back();
    }
  };
  visit(visit);
  std::sort(out.begin(), out.end(), [](const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

CellMap wnpi_to_npi(const CellMap& immersion, CellIndex piece_vertex) {
  if (!is_immersion(immersion))
    throw Error(ErrorCode::not_immersion,
                "wnpi_to_npi: input is not an immersion");
  const TwoComplex& y = *immersion.domain;
  const TwoComplex& x = *immersion.codomain;
  if (piece_vertex >= y.vertex_count())
    throw Error(ErrorCode::invalid_argument, "wnpi_to_npi: unknown vertex");
  const CellIndex base = immersion.vertex_map[piece_vertex];

  auto fresh_id = [](const TwoComplex& c, std::string stem, bool face) {
    std::string id = stem;
    for (int k = 1; face ? c.find_face(id).has_value()
                         : c.find_edge(id).has_value();
         ++k)
      id = stem + std::to_string(k);
    return id;
  };

  auto target = std::make_shared<TwoComplex>(x);
  CellIndex loop = target->add_edge(fresh_id(x, "s", false), base, base);
  target->add_face(fresh_id(x, "D", true), {{loop, false}});

  auto source = std::make_shared<TwoComplex>(y);
  source->add_edge(fresh_id(y, "s", false), piece_vertex, piece_vertex);

  CellMap out = immersion;
  out.edge_map.push_back({loop, false});
  out.domain = std::move(source);
  out.codomain = std::move(target);
  return out;
}

}  // namespace npi
