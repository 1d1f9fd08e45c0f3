#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mutdafny {

/// Half-open byte range [start, end) into a source buffer, with the
/// 1-based line/column of `start`.
struct SourceSpan {
    std::size_t start = 0;
    std::size_t end = 0;
    int line = 1;
    int column = 1;

    std::size_t length() const { return end - start; }
    bool empty() const { return start == end; }
    bool contains(const SourceSpan& other) const {
        return start <= other.start && other.end <= end;
    }
    bool overlaps(const SourceSpan& other) const {
        return start < other.end && other.start < end;
    }
    friend bool operator==(const SourceSpan& a, const SourceSpan& b) {
        return a.start == b.start && a.end == b.end;
    }
};

struct LexError : std::runtime_error {
    int line;
    int column;
    LexError(int line_, int column_, const std::string& what_)
        : std::runtime_error("lex error at " + std::to_string(line_) + ":" +
                             std::to_string(column_) + ": " + what_),
          line(line_),
          column(column_) {}
};

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(int line_, int column_, const std::string& what_)
        : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                             std::to_string(column_) + ": " + what_),
          line(line_),
          column(column_) {}
};

struct SpanOutOfBounds : std::out_of_range {
    explicit SpanOutOfBounds(const SourceSpan& span, std::size_t text_size)
        : std::out_of_range("span [" + std::to_string(span.start) + "," +
                            std::to_string(span.end) + ") out of bounds for text of size " +
                            std::to_string(text_size)) {}
};

inline std::string_view span_text(std::string_view text, const SourceSpan& span) {
    if (span.start > span.end || span.end > text.size())
        throw SpanOutOfBounds(span, text.size());
    return text.substr(span.start, span.end - span.start);
}

/// Replaces [span.start, span.end) with `replacement`. An empty span inserts.
/// Every mutant differs from its original through exactly one call per edit,
/// so single-edit mutants differ in one contiguous range by construction.
inline std::string splice(std::string_view source, const SourceSpan& span,
                          std::string_view replacement) {
    if (span.start > span.end || span.end > source.size())
        throw SpanOutOfBounds(span, source.size());
    std::string out;
    out.reserve(source.size() - span.length() + replacement.size());
    out.append(source.substr(0, span.start));
    out.append(replacement);
    out.append(source.substr(span.end));
    return out;
}

/// Maps byte offsets to 1-based line/column pairs. Columns count bytes.
class LineIndex {
  public:
    explicit LineIndex(std::string_view text) {
        line_starts_.push_back(0);
        for (std::size_t i = 0; i < text.size(); ++i)
            if (text[i] == '\n') line_starts_.push_back(i + 1);
    }

    std::pair<int, int> line_col(std::size_t offset) const {
        std::size_t lo = 0, hi = line_starts_.size();
        while (lo + 1 < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (line_starts_[mid] <= offset)
                lo = mid;
            else
                hi = mid;
        }
        return {static_cast<int>(lo) + 1, static_cast<int>(offset - line_starts_[lo]) + 1};
    }

  private:
    std::vector<std::size_t> line_starts_;
};

}  // namespace mutdafny
