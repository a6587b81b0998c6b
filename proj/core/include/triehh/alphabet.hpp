#pragma once

#include <array>
#include <string>
#include <string_view>

namespace triehh {

/// End-of-sequence marker. Appended to every complete word; a trie leaf
/// carrying it marks a fully learned sequence.
inline constexpr char kEos = '$';

/// Set of symbols a sequence may be built from. EOS is an ordinary member.
class Alphabet {
 public:
  Alphabet() = default;

  /// Printable ASCII (0x20..0x7E). Covers words with '@', '#', ':', '*', etc.
  static const Alphabet& printable_ascii();

  static Alphabet from_symbols(std::string_view symbols);

  bool contains(char c) const { return allowed_[static_cast<unsigned char>(c)]; }
  void add(char c) { allowed_[static_cast<unsigned char>(c)] = true; }

  /// True iff every symbol is allowed and EOS appears nowhere but the final
  /// position.
  bool admits(std::string_view sequence) const;

  /// Throws std::invalid_argument naming the offending symbol when
  /// admits(sequence) is false.
  void validate_sequence(std::string_view sequence) const;

 private:
  std::array<bool, 256> allowed_{};
};

}  // namespace triehh
