#include "dnastore/dna.hpp"

#include <algorithm>

namespace dnastore {

std::size_t hamming_distance(std::string_view a, std::string_view b) {
    if (a.size() != b.size())
        fail(ErrorCode::invalid_argument, "hamming_distance: length mismatch");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) ++d;
    return d;
}

std::size_t bounded_edit_distance(std::string_view a, std::string_view b, std::size_t limit) {
    const std::size_t m = a.size(), n = b.size();
    const std::size_t cap = limit + 1;
    if (m > n + limit || n > m + limit) return cap;
    if (m == 0) return std::min(n, cap);
    if (n == 0) return std::min(m, cap);

    // One DP row over b, restricted to the diagonal band |i - j| <= limit.
    std::vector<std::size_t> row(n + 1, cap);
    for (std::size_t j = 0; j <= std::min(n, limit); ++j) row[j] = j;

    for (std::size_t i = 1; i <= m; ++i) {
        const std::size_t lo = (i > limit) ? i - limit : 0;
        const std::size_t hi = std::min(n, i + limit);
        std::size_t diag = row[lo > 0 ? lo - 1 : 0]; // value of row[i-1][lo-1]
        std::size_t prev_lo = (lo > 0) ? cap : i;    // row[i][lo-1] when lo==0 is column 0 => i
        if (lo == 0) {
            diag = row[0];
            row[0] = i;
            prev_lo = i;
        }
        std::size_t left = prev_lo;
        std::size_t best = cap;
        for (std::size_t j = std::max<std::size_t>(lo, 1); j <= hi; ++j) {
            const std::size_t up = row[j];
            std::size_t v = std::min({diag + (a[i - 1] == b[j - 1] ? 0 : 1), up + 1, left + 1});
            if (v > cap) v = cap;
            row[j] = v;
            diag = up;
            left = v;
            if (v < best) best = v;
        }
        if (hi < n) row[hi + 1] = cap; // seal the band edge for the next row
        if (best >= cap) return cap;
    }
    return std::min(row[n], cap);
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
    const std::size_t m = a.size(), n = b.size();
    std::vector<std::size_t> row(n + 1);
    for (std::size_t j = 0; j <= n; ++j) row[j] = j;
    for (std::size_t i = 1; i <= m; ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= n; ++j) {
            std::size_t up = row[j];
            row[j] = std::min({diag + (a[i - 1] == b[j - 1] ? 0 : 1), up + 1, row[j - 1] + 1});
            diag = up;
        }
    }
    return row[n];
}

PatternMatch locate_prefix(std::string_view text, std::string_view pattern, std::size_t max_edits) {
    PatternMatch out;
    if (pattern.empty()) {
        out.found = true;
        return out;
    }
    // Exact match at offset 0 is the overwhelmingly common case.
    if (text.size() >= pattern.size() && text.compare(0, pattern.size(), pattern) == 0) {
        out.found = true;
        out.end = pattern.size();
        return out;
    }
    const std::size_t window = std::min(text.size(), pattern.size() + max_edits + 4);
    const std::size_t m = pattern.size();
    // Semi-global: leading characters of text are free, D[0][j] = 0.
    std::vector<std::size_t> row(window + 1, 0);
    std::vector<std::size_t> next(window + 1, 0);
    for (std::size_t i = 1; i <= m; ++i) {
        next[0] = i;
        for (std::size_t j = 1; j <= window; ++j) {
            next[j] = std::min({row[j - 1] + (pattern[i - 1] == text[j - 1] ? 0 : 1),
                                row[j] + 1, next[j - 1] + 1});
        }
        row.swap(next);
    }
    std::size_t best = max_edits + 1, best_end = 0;
    for (std::size_t j = 1; j <= window; ++j) {
        if (row[j] < best) {
            best = row[j];
            best_end = j;
        }
    }
    if (best <= max_edits) {
        out.found = true;
        out.end = best_end;
        out.edits = best;
    }
    return out;
}

SuffixMatch locate_suffix(std::string_view text, std::string_view pattern, std::size_t max_edits) {
    std::string rt(text.rbegin(), text.rend());
    std::string rp(pattern.rbegin(), pattern.rend());
    PatternMatch m = locate_prefix(rt, rp, max_edits);
    SuffixMatch out;
    if (m.found) {
        out.found = true;
        out.start = text.size() - m.end;
        out.edits = m.edits;
    }
    return out;
}

} // namespace dnastore
