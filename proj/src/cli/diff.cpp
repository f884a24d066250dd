#include <algorithm>
#include <sstream>

#include "flowmend/cli.hpp"

namespace flowmend {
namespace {

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

enum class Op { Keep, Del, Ins };

/// Edit script from a longest-common-subsequence table; deletions come before insertions.
std::vector<std::pair<Op, std::size_t>> script(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    const std::size_t n = a.size(), m = b.size();
    std::vector<std::vector<int>> lcs(n + 1, std::vector<int>(m + 1, 0));
    for (std::size_t i = n; i-- > 0;)
        for (std::size_t j = m; j-- > 0;)
            lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    std::vector<std::pair<Op, std::size_t>> ops;
    std::size_t i = 0, j = 0;
    while (i < n || j < m) {
        if (i < n && j < m && a[i] == b[j]) {
            ops.push_back({Op::Keep, i});
            ++i;
            ++j;
        } else if (i < n && (j == m || lcs[i + 1][j] >= lcs[i][j + 1])) {
            ops.push_back({Op::Del, i++});
        } else {
            ops.push_back({Op::Ins, j++});
        }
    }
    return ops;
}

std::string range(std::size_t start, std::size_t len) {
    // A zero-length range names the line before it.
    std::string s = std::to_string(len == 0 ? start : start + 1);
    if (len != 1) s += "," + std::to_string(len);
    return s;
}

}  // namespace

LineChanges changed_lines(const std::string& a, const std::string& b) {
    auto la = lines_of(a), lb = lines_of(b);
    LineChanges out;
    for (auto [op, k] : script(la, lb)) {
        if (op == Op::Del) out.deleted.push_back(static_cast<int>(k) + 1);
        if (op == Op::Ins) out.inserted.push_back(static_cast<int>(k) + 1);
    }
    return out;
}

std::string unified_diff(const std::string& a, const std::string& b, const std::string& name_a,
                         const std::string& name_b, int context) {
    auto la = lines_of(a), lb = lines_of(b);
    auto ops = script(la, lb);
    // Position of each op in both files.
    std::vector<std::size_t> pa(ops.size() + 1), pb(ops.size() + 1);
    for (std::size_t k = 0; k < ops.size(); ++k) {
        pa[k + 1] = pa[k] + (ops[k].first != Op::Ins);
        pb[k + 1] = pb[k] + (ops[k].first != Op::Del);
    }
    std::vector<std::size_t> changes;
    for (std::size_t k = 0; k < ops.size(); ++k)
        if (ops[k].first != Op::Keep) changes.push_back(k);
    if (changes.empty()) return "";

    const std::size_t ctx = static_cast<std::size_t>(std::max(context, 0));
    std::string out = "--- " + name_a + "\n+++ " + name_b + "\n";
    std::size_t c = 0;
    while (c < changes.size()) {
        std::size_t first = changes[c], last = changes[c];
        while (c + 1 < changes.size() && changes[c + 1] - last <= 2 * ctx + 1) last = changes[++c];
        ++c;
        std::size_t lo = first >= ctx ? first - ctx : 0;
        std::size_t hi = std::min(ops.size(), last + ctx + 1);
        out += "@@ -" + range(pa[lo], pa[hi] - pa[lo]) + " +" + range(pb[lo], pb[hi] - pb[lo]) + " @@\n";
        for (std::size_t k = lo; k < hi; ++k) {
            switch (ops[k].first) {
                case Op::Keep: out += " " + la[ops[k].second] + "\n"; break;
                case Op::Del: out += "-" + la[ops[k].second] + "\n"; break;
                case Op::Ins: out += "+" + lb[ops[k].second] + "\n"; break;
            }
        }
    }
    return out;
}

}  // namespace flowmend
