#include "triehh/alphabet.hpp"

#include <stdexcept>

namespace triehh {

const Alphabet& Alphabet::printable_ascii() {
  static const Alphabet instance = [] {
    Alphabet a;
    for (int c = 0x20; c <= 0x7E; ++c) a.add(static_cast<char>(c));
    return a;
  }();
  return instance;
}

Alphabet Alphabet::from_symbols(std::string_view symbols) {
  Alphabet a;
  for (char c : symbols) a.add(c);
  return a;
}

bool Alphabet::admits(std::string_view sequence) const {
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    if (!contains(sequence[i])) return false;
    if (sequence[i] == kEos && i + 1 != sequence.size()) return false;
  }
  return true;
}

void Alphabet::validate_sequence(std::string_view sequence) const {
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    if (!contains(sequence[i])) {
      throw std::invalid_argument("sequence \"" + std::string(sequence) +
                                  "\" contains a symbol outside the configured alphabet "
                                  "(dataset/alphabet mismatch)");
    }
    if (sequence[i] == kEos && i + 1 != sequence.size()) {
      throw std::invalid_argument("sequence \"" + std::string(sequence) +
                                  "\" has a non-terminal EOS marker");
    }
  }
}

}  // namespace triehh
