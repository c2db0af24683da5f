#ifndef DNASTORE_DNA_HPP
#define DNASTORE_DNA_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dnastore/errors.hpp"

namespace dnastore {

/// Nucleotide in canonical order A < C < G < T (values 0..3).
enum class Base : std::uint8_t { A = 0, C = 1, G = 2, T = 3 };

inline char base_to_char(Base b) { return "ACGT"[static_cast<int>(b)]; }

inline Base base_from_char(char c) {
    switch (c) {
        case 'A': return Base::A;
        case 'C': return Base::C;
        case 'G': return Base::G;
        case 'T': return Base::T;
        default: fail(ErrorCode::malformed_payload, std::string("not a DNA base: '") + c + "'");
    }
}

/// Watson-Crick complement (A<->T, C<->G).
inline Base complement(Base b) { return static_cast<Base>(3 - static_cast<int>(b)); }

/// True for the strong (G/C) GC class, false for the weak (A/T) class.
inline bool is_strong(Base b) { return b == Base::C || b == Base::G; }
inline bool is_strong(char c) { return c == 'C' || c == 'G'; }

/// A DNA sequence stored as validated 'A'/'C'/'G'/'T' text.
class DnaString {
public:
    DnaString() = default;

    /// Validates every character.
    static DnaString from_text(std::string_view text) {
        for (char c : text) base_from_char(c);
        DnaString s;
        s.seq_.assign(text);
        return s;
    }

    const std::string& str() const { return seq_; }
    std::string_view view() const { return seq_; }
    std::size_t size() const { return seq_.size(); }
    bool empty() const { return seq_.empty(); }

    Base base(std::size_t i) const { return base_from_char(seq_[i]); }
    char operator[](std::size_t i) const { return seq_[i]; }

    void push_back(Base b) { seq_.push_back(base_to_char(b)); }
    void append(const DnaString& other) { seq_ += other.seq_; }
    DnaString substr(std::size_t pos, std::size_t len = std::string::npos) const {
        DnaString s;
        s.seq_ = seq_.substr(pos, len);
        return s;
    }

    DnaString reverse_complement() const {
        DnaString r;
        r.seq_.reserve(seq_.size());
        for (auto it = seq_.rbegin(); it != seq_.rend(); ++it)
            r.seq_.push_back(base_to_char(complement(base_from_char(*it))));
        return r;
    }

    std::size_t gc_count() const {
        std::size_t n = 0;
        for (char c : seq_)
            if (is_strong(c)) ++n;
        return n;
    }

    double gc_fraction() const { return seq_.empty() ? 0.0 : static_cast<double>(gc_count()) / seq_.size(); }

    std::size_t max_homopolymer_run() const {
        std::size_t best = 0, run = 0;
        char prev = '\0';
        for (char c : seq_) {
            run = (c == prev) ? run + 1 : 1;
            prev = c;
            if (run > best) best = run;
        }
        return best;
    }

    friend bool operator==(const DnaString& a, const DnaString& b) { return a.seq_ == b.seq_; }
    friend bool operator!=(const DnaString& a, const DnaString& b) { return a.seq_ != b.seq_; }
    friend bool operator<(const DnaString& a, const DnaString& b) { return a.seq_ < b.seq_; }

private:
    std::string seq_;
};

/// Hamming distance; both strings must have equal length.
std::size_t hamming_distance(std::string_view a, std::string_view b);

/// Levenshtein distance capped at `limit`: returns min(d(a,b), limit + 1).
/// Computed over a diagonal band of half-width `limit`.
std::size_t bounded_edit_distance(std::string_view a, std::string_view b, std::size_t limit);

/// Full (unbounded) Levenshtein distance.
std::size_t edit_distance(std::string_view a, std::string_view b);

struct PatternMatch {
    bool found = false;
    std::size_t end = 0;   // one past the last matched character in `text`
    std::size_t edits = 0; // edit distance of the best match
};

/// Best approximate occurrence of `pattern` inside `text` with at most
/// `max_edits` edits, anchored near the start of `text` (the scanned
/// window is pattern.size() + max_edits + slack). Semi-global DP: gaps in
/// `text` before/after the match are free.
PatternMatch locate_prefix(std::string_view text, std::string_view pattern, std::size_t max_edits);

/// Best approximate occurrence of `pattern` ending near the end of `text`,
/// returning the start offset of the match in `text`.
struct SuffixMatch {
    bool found = false;
    std::size_t start = 0;
    std::size_t edits = 0;
};
SuffixMatch locate_suffix(std::string_view text, std::string_view pattern, std::size_t max_edits);

} // namespace dnastore

#endif
