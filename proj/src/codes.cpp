#include "ftlink/codes.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ftlink {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) {
    return "";
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

int parse_int_field(const std::string& field, int line_number) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != field.size()) {
    throw std::invalid_argument("line " + std::to_string(line_number) + ": expected integer, got '" +
                                field + "'");
  }
  return value;
}

}  // namespace

std::string CodeSpec::key() const {
  return std::to_string(n) + "." + std::to_string(k) + "." + std::to_string(d);
}

void validate_code(const CodeSpec& code, int max_block_length) {
  if (code.k < 1 || code.k >= code.n) {
    throw std::invalid_argument("code " + code.key() + ": need 1 <= k < n");
  }
  if (code.d < 2) {
    throw std::invalid_argument("code " + code.key() + ": need d >= 2");
  }
  if (code.n > max_block_length) {
    throw std::invalid_argument("code " + code.key() + ": n exceeds maximum block length " +
                                std::to_string(max_block_length));
  }
}

void CodeRegistry::add(CodeSpec code) {
  validate_code(code, max_block_length_);
  if (find(code.n, code.k, code.d)) {
    throw std::invalid_argument("duplicate code " + code.key());
  }
  if (code.label.empty()) {
    code.label = "code-" + std::to_string(code.n) + "-" + std::to_string(code.k) + "-" +
                 std::to_string(code.d);
  }
  codes_.push_back(std::move(code));
}

std::optional<CodeSpec> CodeRegistry::find(int n, int k, int d) const {
  for (const auto& code : codes_) {
    if (code.n == n && code.k == k && code.d == d) {
      return code;
    }
  }
  return std::nullopt;
}

CodeRegistry default_registry() {
  CodeRegistry registry;
  for (int m = 2; m <= 15; ++m) {
    registry.add({2 * m, 2 * m - 2, 2, "iceberg-" + std::to_string(2 * m)});
  }
  registry.add({5, 1, 3, "five-qubit"});
  registry.add({7, 1, 3, "steane"});
  registry.add({8, 3, 3, "code-8-3-3"});
  registry.add({16, 6, 4, "code-16-6-4"});
  return registry;
}

CodeRegistry parse_registry(std::istream& in, int max_block_length) {
  CodeRegistry registry(max_block_length);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    line = trim(line);
    if (line.empty() || line.front() == '#') {
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      fields.push_back(trim(field));
    }
    if (fields.size() >= 3 && fields[0] == "n" && fields[1] == "k" && fields[2] == "d") {
      continue;
    }
    if (fields.size() < 3 || fields.size() > 4) {
      throw std::invalid_argument("line " + std::to_string(line_number) +
                                  ": expected 'n,k,d,label'");
    }
    CodeSpec code{parse_int_field(fields[0], line_number), parse_int_field(fields[1], line_number),
                  parse_int_field(fields[2], line_number), fields.size() == 4 ? fields[3] : ""};
    try {
      registry.add(code);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return registry;
}

CodeRegistry load_registry(const std::string& path, int max_block_length) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open code registry '" + path + "'");
  }
  try {
    return parse_registry(in, max_block_length);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ":" + e.what());
  }
}

void write_registry(std::ostream& out, const CodeRegistry& registry) {
  out << "n,k,d,label\n";
  for (const auto& code : registry.codes()) {
    out << code.n << ',' << code.k << ',' << code.d << ',' << code.label << '\n';
  }
}

}  // namespace ftlink
