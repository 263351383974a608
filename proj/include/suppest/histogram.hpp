#pragma once

// Sample ingestion: histograms of symbol counts and their fingerprints
// (counts of counts), plus the text tokenizer and count-file reader.

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace suppest {

// Symbol -> positive count. Symbols are interned to dense ids in first-seen
// order, so iteration order is deterministic.
class Histogram {
 public:
  // Adds count occurrences of symbol. count must be >= 1.
  void add(std::string_view symbol, std::uint64_t count = 1);

  std::size_t distinct() const noexcept { return counts_.size(); }
  std::uint64_t total() const noexcept { return total_; }
  bool empty() const noexcept { return counts_.empty(); }

  const std::vector<std::string>& symbols() const noexcept { return symbols_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  // 0 when the symbol was never added.
  std::uint64_t count(std::string_view symbol) const;

 private:
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> symbols_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

// h_j = number of symbols seen exactly j times, stored sparsely.
class Fingerprint {
 public:
  Fingerprint() = default;
  // Entries with h == 0 are dropped; j must be >= 1.
  explicit Fingerprint(const std::map<std::uint64_t, std::uint64_t>& h);

  // Adds `symbols` symbols that were each seen j times.
  void add(std::uint64_t j, std::uint64_t symbols = 1);

  const std::map<std::uint64_t, std::uint64_t>& entries() const noexcept { return h_; }
  std::uint64_t h(std::uint64_t j) const;
  // Sample size n = sum_j j h_j.
  std::uint64_t n() const noexcept { return n_; }
  // Counting estimate S_c = sum_j h_j.
  std::uint64_t distinct() const noexcept { return distinct_; }
  bool empty() const noexcept { return h_.empty(); }

  bool operator==(const Fingerprint& other) const { return h_ == other.h_; }

 private:
  std::map<std::uint64_t, std::uint64_t> h_;
  std::uint64_t n_ = 0;
  std::uint64_t distinct_ = 0;
};

Fingerprint fingerprint(const Histogram& hist);
Fingerprint fingerprint_from_counts(std::span<const std::uint64_t> counts);

// Splits UTF-8 text into lowercase word tokens. A token is a maximal run of
// letters, digits and apostrophes (U+2019 is folded to '). Letters are ASCII
// letters plus every code point >= U+00C0 except the Latin-1 signs U+00D7,
// U+00F7, the General Punctuation block U+2000-U+206F, U+3000-U+303F and
// U+FEFF. ASCII and Latin-1 letters are lowercased. Runs of apostrophes
// alone are dropped. Throws EncodingError with the byte offset of the first
// invalid sequence.
std::vector<std::string> tokenize_text(std::string_view bytes);

Histogram histogram_from_tokens(std::span<const std::string> tokens);

// Each nonempty line is `symbol<TAB>count` or a bare count. Bare counts get
// the symbol id "#<line>". Throws ParseError on malformed lines and
// ValidationError on counts <= 0 or repeated symbols.
Histogram histogram_from_counts(std::istream& in);
Histogram histogram_from_counts_file(const std::filesystem::path& path);

// `j<TAB>h_j` lines in increasing j.
std::string serialize_fingerprint(const Fingerprint& fp);
Fingerprint parse_fingerprint(std::istream& in);

// Whole file as bytes; throws InputError when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace suppest
