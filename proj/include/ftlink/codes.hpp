#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ftlink {

/// An [[n, k, d]] error-detecting code used as one distillation stage. Only the
/// parameters matter here; no stabilizer structure is carried.
struct CodeSpec {
  int n = 0;
  int k = 0;
  int d = 0;
  std::string label;

  /// "n.k.d", the form used in sequence strings.
  std::string key() const;

  friend bool operator==(const CodeSpec& a, const CodeSpec& b) {
    return a.n == b.n && a.k == b.k && a.d == b.d;
  }
};

constexpr int kDefaultMaxBlockLength = 30;

void validate_code(const CodeSpec& code, int max_block_length = kDefaultMaxBlockLength);

/// Ordered set of codes, unique on (n, k, d). Iteration order is insertion
/// order, which fixes the optimizer's enumeration order.
class CodeRegistry {
 public:
  explicit CodeRegistry(int max_block_length = kDefaultMaxBlockLength)
      : max_block_length_(max_block_length) {}

  void add(CodeSpec code);
  std::optional<CodeSpec> find(int n, int k, int d) const;

  const std::vector<CodeSpec>& codes() const { return codes_; }
  std::size_t size() const { return codes_.size(); }
  bool empty() const { return codes_.empty(); }
  int max_block_length() const { return max_block_length_; }

 private:
  int max_block_length_;
  std::vector<CodeSpec> codes_;
};

/// Iceberg codes [[2m, 2m-2, 2]] for m = 2..15 plus [[5,1,3]], [[7,1,3]],
/// [[8,3,3]] and [[16,6,4]].
CodeRegistry default_registry();

/// Registry text format: one record per line, `n,k,d,label`. Blank lines and
/// lines starting with '#' are ignored; an optional `n,k,d,label` header line
/// is skipped. Errors carry the 1-based line number.
CodeRegistry parse_registry(std::istream& in, int max_block_length = kDefaultMaxBlockLength);
CodeRegistry load_registry(const std::string& path,
                           int max_block_length = kDefaultMaxBlockLength);
void write_registry(std::ostream& out, const CodeRegistry& registry);

}  // namespace ftlink
