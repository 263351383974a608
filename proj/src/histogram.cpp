#include "suppest/histogram.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "suppest/errors.hpp"

namespace suppest {

void Histogram::add(std::string_view symbol, std::uint64_t count) {
  if (count == 0) throw ValidationError("histogram counts must be positive");
  auto [it, inserted] = index_.try_emplace(std::string(symbol), counts_.size());
  if (inserted) {
    symbols_.emplace_back(symbol);
    counts_.push_back(count);
  } else {
    counts_[it->second] += count;
  }
  total_ += count;
}

std::uint64_t Histogram::count(std::string_view symbol) const {
  const auto it = index_.find(std::string(symbol));
  return it == index_.end() ? 0 : counts_[it->second];
}

Fingerprint::Fingerprint(const std::map<std::uint64_t, std::uint64_t>& h) {
  for (const auto& [j, c] : h) add(j, c);
}

void Fingerprint::add(std::uint64_t j, std::uint64_t symbols) {
  if (j == 0) throw ValidationError("fingerprint index j must be >= 1");
  if (symbols == 0) return;
  h_[j] += symbols;
  n_ += j * symbols;
  distinct_ += symbols;
}

std::uint64_t Fingerprint::h(std::uint64_t j) const {
  const auto it = h_.find(j);
  return it == h_.end() ? 0 : it->second;
}

Fingerprint fingerprint_from_counts(std::span<const std::uint64_t> counts) {
  Fingerprint fp;
  for (std::uint64_t c : counts)
    if (c > 0) fp.add(c);
  return fp;
}

Fingerprint fingerprint(const Histogram& hist) { return fingerprint_from_counts(hist.counts()); }

namespace {

// Decodes one code point starting at bytes[i]; advances i. Returns false on
// an invalid sequence.
bool decode_utf8(std::string_view bytes, std::size_t& i, char32_t& cp) {
  const auto b0 = static_cast<unsigned char>(bytes[i]);
  int len = 0;
  char32_t min = 0;
  if (b0 < 0x80) {
    cp = b0;
    ++i;
    return true;
  } else if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
    min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
    min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
    min = 0x10000;
  } else {
    return false;
  }
  if (i + static_cast<std::size_t>(len) > bytes.size()) return false;
  for (int k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(bytes[i + static_cast<std::size_t>(k)]);
    if ((b & 0xC0) != 0x80) return false;
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
  i += static_cast<std::size_t>(len);
  return true;
}

bool is_word_char(char32_t cp) {
  if (cp < 0x80)
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9') ||
           cp == '\'';
  if (cp < 0xC0 || cp == 0xD7 || cp == 0xF7) return false;
  if (cp >= 0x2000 && cp <= 0x206F) return cp == 0x2019;
  if (cp >= 0x3000 && cp <= 0x303F) return false;
  return cp != 0xFEFF;
}

char32_t fold(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  if (cp == 0x2019) return '\'';
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_count(std::string_view field, std::size_t line, const char* what) {
  field = trim(field);
  if (field.empty()) throw ParseError(std::string("missing ") + what, line);
  const char* first = field.data();
  const char* last = first + field.size();
  std::uint64_t value = 0;
  if (field.front() == '-' || field.front() == '+') {
    std::int64_t signed_value = 0;
    const char* start = field.front() == '+' ? first + 1 : first;
    const auto [ptr, ec] = std::from_chars(start, last, signed_value);
    if (ec != std::errc() || ptr != last)
      throw ParseError(std::string("malformed ") + what + " '" + std::string(field) + "'", line);
    if (signed_value <= 0)
      throw ValidationError(std::string(what) + " must be positive, got " + std::string(field),
                            line);
    return static_cast<std::uint64_t>(signed_value);
  }
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw ParseError(std::string("malformed ") + what + " '" + std::string(field) + "'", line);
  if (value == 0) throw ValidationError(std::string(what) + " must be positive, got 0", line);
  return value;
}

}  // namespace

std::vector<std::string> tokenize_text(std::string_view bytes) {
  std::vector<std::string> tokens;
  std::string current;
  // Runs made only of apostrophes are quotation marks, not words.
  auto flush = [&] {
    if (current.find_first_not_of('\'') != std::string::npos) tokens.push_back(current);
    current.clear();
  };
  std::size_t i = 0;
  while (i < bytes.size()) {
    const std::size_t start = i;
    char32_t cp = 0;
    if (!decode_utf8(bytes, i, cp)) throw EncodingError("malformed sequence", start);
    if (is_word_char(cp)) {
      append_utf8(current, fold(cp));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

Histogram histogram_from_tokens(std::span<const std::string> tokens) {
  Histogram hist;
  for (const auto& t : tokens) hist.add(t);
  return hist;
}

Histogram histogram_from_counts(std::istream& in) {
  Histogram hist;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text(raw);
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    if (trim(text).empty()) continue;
    const auto tab = text.find('\t');
    std::string symbol;
    std::uint64_t count = 0;
    if (tab == std::string_view::npos) {
      count = parse_count(text, line, "count");
      symbol = "#" + std::to_string(line);
    } else {
      symbol = std::string(text.substr(0, tab));
      if (trim(symbol).empty()) throw ParseError("empty symbol", line);
      count = parse_count(text.substr(tab + 1), line, "count");
    }
    if (hist.count(symbol) != 0) throw ValidationError("repeated symbol '" + symbol + "'", line);
    hist.add(symbol, count);
  }
  return hist;
}

Histogram histogram_from_counts_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open counts file " + path.string());
  return histogram_from_counts(in);
}

std::string serialize_fingerprint(const Fingerprint& fp) {
  std::string out;
  for (const auto& [j, h] : fp.entries()) {
    out += std::to_string(j);
    out += '\t';
    out += std::to_string(h);
    out += '\n';
  }
  return out;
}

Fingerprint parse_fingerprint(std::istream& in) {
  Fingerprint fp;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text(raw);
    if (trim(text).empty()) continue;
    const auto tab = text.find('\t');
    if (tab == std::string_view::npos) throw ParseError("expected j<TAB>h_j", line);
    const std::uint64_t j = parse_count(text.substr(0, tab), line, "j");
    const std::uint64_t h = parse_count(text.substr(tab + 1), line, "h_j");
    if (fp.h(j) != 0) throw ValidationError("repeated j = " + std::to_string(j), line);
    fp.add(j, h);
  }
  return fp;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace suppest
