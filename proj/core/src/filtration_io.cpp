#include <charconv>
#include <fstream>
#include <sstream>

#include "mpm/errors.hpp"
#include "mpm/filtration.hpp"

namespace mpm {

namespace {

constexpr std::string_view kMagic = "mpm-filtration 1";

void append_double(std::string& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  std::string_view next(std::string_view what) {
    if (pos_ >= text_.size()) fail("unexpected end of file, expected " + std::string(what));
    auto end = text_.find('\n', pos_);
    if (end == std::string_view::npos) end = text_.size();
    auto line = text_.substr(pos_, end - pos_);
    pos_ = end + 1;
    ++line_no_;
    return line;
  }

  bool at_end() const { return pos_ >= text_.size(); }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ValidationError("filtration file, line " + std::to_string(line_no_) + ": " + msg);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T>
T parse_number(std::string_view token, const LineReader& reader) {
  T value{};
  auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
    reader.fail("malformed number '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> keyed(LineReader& reader, std::string_view key) {
  auto tokens = split(reader.next(key));
  if (tokens.empty() || tokens[0] != key) reader.fail("expected '" + std::string(key) + "'");
  tokens.erase(tokens.begin());
  return tokens;
}

}  // namespace

std::string serialize_filtration(const MultiFiltration& filtration) {
  const auto& box = filtration.box();
  std::string out;
  out += kMagic;
  out += "\nk ";
  out += std::to_string(box.dim());
  out += "\nbox";
  for (int c : box.upper().coords()) out += " " + std::to_string(c);
  out += "\noutcomes ";
  out += std::to_string(filtration.outcomes());
  out += "\nweights\n";
  for (double w : filtration.space().weights()) {
    append_double(out, w);
    out += '\n';
  }
  out += "partitions\n";
  for (std::size_t lin = 0; lin < box.volume(); ++lin) {
    for (std::size_t i = 0; i < box.dim(); ++i) {
      if (i) out += ' ';
      out += std::to_string(box.coord(lin, i));
    }
    out += " :";
    for (auto label : filtration.at(lin).labels()) {
      out += ' ';
      out += std::to_string(label);
    }
    out += '\n';
  }
  out += "end\n";
  return out;
}

MultiFiltration parse_filtration(std::string_view text) {
  LineReader reader(text);
  if (reader.next("header") != kMagic) reader.fail("expected header '" + std::string(kMagic) + "'");

  auto k_tokens = keyed(reader, "k");
  if (k_tokens.size() != 1) reader.fail("'k' takes one value");
  const auto k = parse_number<std::size_t>(k_tokens[0], reader);
  if (k == 0 || k > kMaxAxes) reader.fail("k must be between 1 and " + std::to_string(kMaxAxes));

  auto box_tokens = keyed(reader, "box");
  if (box_tokens.size() != k) reader.fail("'box' needs " + std::to_string(k) + " coordinates");
  std::vector<int> upper;
  for (auto t : box_tokens) upper.push_back(parse_number<int>(t, reader));
  for (int c : upper) {
    if (c < 0) reader.fail("box coordinates must be non-negative");
  }

  auto n_tokens = keyed(reader, "outcomes");
  if (n_tokens.size() != 1) reader.fail("'outcomes' takes one value");
  const auto n = parse_number<std::size_t>(n_tokens[0], reader);
  if (n == 0) reader.fail("outcomes must be positive");

  if (!keyed(reader, "weights").empty()) reader.fail("'weights' takes no values");
  std::vector<double> weights(n);
  for (auto& w : weights) {
    auto tokens = split(reader.next("weight"));
    if (tokens.size() != 1) reader.fail("expected one weight per line");
    w = parse_number<double>(tokens[0], reader);
  }

  if (!keyed(reader, "partitions").empty()) reader.fail("'partitions' takes no values");
  Box box{MultiIndex(upper)};
  std::vector<Partition> partitions;
  partitions.reserve(box.volume());
  for (std::size_t lin = 0; lin < box.volume(); ++lin) {
    auto tokens = split(reader.next("partition line"));
    if (tokens.size() != k + 1 + n || tokens[k] != ":") {
      reader.fail("partition line must be '<index> : <" + std::to_string(n) + " labels>'");
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (parse_number<int>(tokens[i], reader) != box.coord(lin, i)) {
        reader.fail("expected index " + box.index(lin).to_string() + " (lexicographic order)");
      }
    }
    std::vector<std::uint32_t> labels(n);
    for (std::size_t w = 0; w < n; ++w) labels[w] = parse_number<std::uint32_t>(tokens[k + 1 + w], reader);
    try {
      partitions.emplace_back(std::move(labels));
    } catch (const ValidationError& e) {
      reader.fail("partition at " + box.index(lin).to_string() + ": " + e.what());
    }
  }
  if (reader.next("'end'") != "end") reader.fail("expected 'end'");
  while (!reader.at_end()) {
    if (!reader.next("eof").empty()) reader.fail("trailing content after 'end'");
  }

  return MultiFiltration(SampleSpace(std::move(weights)), MultiIndex(upper), std::move(partitions));
}

void save_filtration(const MultiFiltration& filtration, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  out << serialize_filtration(filtration);
  if (!out) throw ConfigError("failed writing " + path.string());
}

MultiFiltration load_filtration(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_filtration(buf.str());
}

}  // namespace mpm
