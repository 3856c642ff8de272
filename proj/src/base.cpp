#include "clapim/base.hpp"

namespace clapim {

Base encode_base(char symbol) {
  const std::uint8_t code = kBaseCodeTable[static_cast<unsigned char>(symbol)];
  if (code == kInvalidBaseCode) {
    throw InvalidBaseError(std::string("not a canonical base: '") + symbol + "'");
  }
  return static_cast<Base>(code);
}

char base_to_char(Base base) {
  static constexpr char kChars[4] = {'A', 'T', 'G', 'C'};
  return kChars[static_cast<std::uint8_t>(base)];
}

Sequence Sequence::from_string(std::string_view text) {
  std::vector<Base> bases;
  bases.reserve(text.size());
  for (char symbol : text) {
    bases.push_back(encode_base(symbol));
  }
  return Sequence(std::move(bases));
}

std::string Sequence::to_string() const {
  std::string out;
  out.reserve(bases_.size());
  for (Base base : bases_) {
    out.push_back(base_to_char(base));
  }
  return out;
}

Sequence Sequence::subsequence(std::size_t pos, std::size_t len) const {
  if (pos + len > bases_.size()) {
    throw LengthError("subsequence out of range");
  }
  return Sequence(std::vector<Base>(bases_.begin() + static_cast<std::ptrdiff_t>(pos),
                                    bases_.begin() + static_cast<std::ptrdiff_t>(pos + len)));
}

}  // namespace clapim
