#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "npi/complex.hpp"

namespace npi {

// A generator or its formal inverse. Generator g is rendered as the g-th
// lowercase letter, its inverse as the uppercase letter.
struct Letter {
  std::uint8_t generator = 0;
  bool inverse = false;

  Letter inverted() const { return {generator, !inverse}; }
  char to_char() const;
  friend bool operator==(Letter, Letter) = default;
  // a < A < b < B < ...
  friend auto operator<=>(Letter x, Letter y) {
    return (2 * x.generator + x.inverse) <=> (2 * y.generator + y.inverse);
  }
};

// Freely reduced word in a free group.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters);  // freely reduces

  // "abbaB" = a b^2 a b^-1. Throws Error(parse_error) on other characters.
  static Word parse(std::string_view text);

  const std::vector<Letter>& letters() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  std::string to_string() const;

  Word inverse() const;
  Word rotated(std::size_t k) const;
  Word cyclically_reduced() const;
  bool is_cyclically_reduced() const;

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word& a, const Word& b) {
    return a.letters_ <=> b.letters_;
  }

 private:
  std::vector<Letter> letters_;
};

struct Presentation {
  std::size_t generators = 2;
  std::vector<Word> relators;
};

// One vertex, one loop per generator, one face per relator. Relators that
// are not cyclically reduced are reduced and a warning is appended to
// `warnings` when given. Throws Error(invalid_argument) for an empty
// relator or a letter beyond the generator count.
TwoComplex presentation_complex(const Presentation& p,
                                std::vector<std::string>* warnings = nullptr);

// Presentation complex of <a, b | w, b a^n b^-1 a^-(n+1)>.
TwoComplex miller_schupp(int n, const Word& w,
                         std::vector<std::string>* warnings = nullptr);

Word miller_schupp_relator(int n);

std::int64_t exponent_sum(const Word& w, std::uint8_t generator);

// Least word, in letter order, among the rotations of the cyclic reduction
// of w and of its inverse.
Word normalize_word(const Word& w);

// Least rotation of the cyclic reduction of w (inverse not considered).
Word least_rotation(const Word& w);

// Cyclically reduced two-generator words of length <= max_len with
// exponent sum 1 in b, one per normalize_word class. Each is emitted as its
// least rotation; ordered by length then letters.
std::vector<Word> enumerate_words(std::size_t max_len);

// Y v S^1 -> X v D^2: a new loop at `piece_vertex` mapped onto a new loop
// at its image, which bounds a new monogon face in the target.
CellMap wnpi_to_npi(const CellMap& immersion, CellIndex piece_vertex);

}  // namespace npi
