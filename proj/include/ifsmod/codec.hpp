#pragma once

// IFS code text format, one directive or map per line:
//
//   # comment (also allowed after any content)
//   @name <free text up to end of line>
//   @basis x1 y1 x2 y2 x3 y3
//   @render <points> <burn_in> <seed>
//   a11 a12 a21 a22 b1 b2 [weight]
//
// Either every map line carries a weight or none does; weights must sum to 1 within 1e-6.

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ifsmod/barycentric.hpp"
#include "ifsmod/error.hpp"
#include "ifsmod/ifs.hpp"

namespace ifsmod {

struct RenderDefaults {
    std::size_t n_points = 100000;
    std::size_t burn_in = ChaosParams::kDefaultBurnIn;
    std::uint64_t seed = 0;

    friend bool operator==(const RenderDefaults&, const RenderDefaults&) = default;
};

struct MapEntry {
    AffineMap2 map;
    std::optional<double> weight;

    friend bool operator==(const MapEntry&, const MapEntry&) = default;
};

struct IfsDocument {
    static constexpr double kWeightSumTolerance = 1e-6;

    std::string name;
    std::vector<MapEntry> maps;
    std::optional<AffineBasis> basis;
    std::optional<RenderDefaults> render;

    friend bool operator==(const IfsDocument&, const IfsDocument&) = default;

    bool has_weights() const { return !maps.empty() && maps.front().weight.has_value(); }

    /// The system described by the document; weights are renormalized to sum to exactly 1.
    IfsSystem system() const {
        std::vector<AffineMap2> affine;
        affine.reserve(maps.size());
        for (const auto& m : maps) affine.push_back(m.map);
        if (!has_weights()) return IfsSystem(std::move(affine));
        std::vector<double> weights;
        double total = 0.0;
        for (const auto& m : maps) total += *m.weight;
        for (const auto& m : maps) weights.push_back(*m.weight / total);
        return IfsSystem(std::move(affine), std::move(weights));
    }

    ChaosParams chaos_params() const {
        const RenderDefaults r = render.value_or(RenderDefaults{});
        return {r.n_points, r.burn_in, r.seed, std::nullopt};
    }
};

namespace detail {

struct Token {
    std::string_view text;
    std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        if (i >= line.size()) break;
        const std::size_t begin = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        out.push_back({line.substr(begin, i - begin), begin + 1});
    }
    return out;
}

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

inline double parse_real(const Token& tok, std::size_t line) {
    std::string_view text = tok.text;
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc::result_out_of_range && end == text.data() + text.size())
        throw ParseError(ParseErrorKind::NonFiniteNumber, line, tok.column,
                         "'" + std::string(tok.text) + "' is out of range");
    if (ec != std::errc{} || end != text.data() + text.size() || text.empty())
        throw ParseError(ParseErrorKind::MalformedLine, line, tok.column,
                         "'" + std::string(tok.text) + "' is not a number");
    if (!std::isfinite(value))
        throw ParseError(ParseErrorKind::NonFiniteNumber, line, tok.column,
                         "'" + std::string(tok.text) + "' is not finite");
    return value;
}

inline std::uint64_t parse_unsigned(const Token& tok, std::size_t line) {
    std::uint64_t value = 0;
    const char* last = tok.text.data() + tok.text.size();
    const auto [end, ec] = std::from_chars(tok.text.data(), last, value);
    if (ec != std::errc{} || end != last || tok.text.empty())
        throw ParseError(ParseErrorKind::MalformedLine, line, tok.column,
                         "'" + std::string(tok.text) + "' is not an unsigned integer");
    return value;
}

inline void expect_arity(const std::vector<Token>& toks, std::size_t n, std::size_t line,
                         std::string_view what) {
    if (toks.size() != n) {
        const std::size_t col = toks.size() > n ? toks[n].column : toks.back().column;
        throw ParseError(ParseErrorKind::MalformedLine, line, col,
                         std::string(what) + " expects " + std::to_string(n - 1) + " values, got " +
                             std::to_string(toks.size() - 1));
    }
}

/// Shortest representation that reads back to the same double (at most 17 significant digits).
inline void append_real(std::string& out, double v) {
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    out.append(buf.data(), end);
}

}  // namespace detail

inline IfsDocument parse_ifs(std::string_view text) {
    using detail::Token;
    IfsDocument doc;
    bool seen_name = false;
    std::size_t line_no = 0;
    std::size_t first_map_line = 0;

    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

        const std::vector<Token> toks = detail::tokenize(line);
        if (toks.empty()) continue;
        const std::string_view head = toks.front().text;

        if (head.front() == '@') {
            const auto duplicate = [&] {
                throw ParseError(ParseErrorKind::MalformedLine, line_no, toks.front().column,
                                 "duplicate " + std::string(head) + " directive");
            };
            if (head == "@name") {
                if (seen_name) duplicate();
                seen_name = true;
                doc.name = std::string(detail::trim(line.substr(toks.front().column - 1 + head.size())));
            } else if (head == "@basis") {
                if (doc.basis) duplicate();
                detail::expect_arity(toks, 7, line_no, "@basis");
                std::array<double, 6> v{};
                for (std::size_t i = 0; i < 6; ++i) v[i] = detail::parse_real(toks[i + 1], line_no);
                doc.basis = AffineBasis{{v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}};
            } else if (head == "@render") {
                if (doc.render) duplicate();
                detail::expect_arity(toks, 4, line_no, "@render");
                RenderDefaults r;
                r.n_points = detail::parse_unsigned(toks[1], line_no);
                r.burn_in = detail::parse_unsigned(toks[2], line_no);
                r.seed = detail::parse_unsigned(toks[3], line_no);
                if (r.n_points == 0)
                    throw ParseError(ParseErrorKind::MalformedLine, line_no, toks[1].column,
                                     "@render point count must be positive");
                doc.render = r;
            } else {
                throw ParseError(ParseErrorKind::MalformedLine, line_no, toks.front().column,
                                 "unknown directive " + std::string(head));
            }
            continue;
        }

        if (toks.size() != 6 && toks.size() != 7) {
            const std::size_t col = toks.size() > 7 ? toks[7].column : toks.back().column;
            throw ParseError(ParseErrorKind::MalformedLine, line_no, col,
                             "map line needs 6 or 7 values, got " + std::to_string(toks.size()));
        }
        std::array<double, 6> v{};
        for (std::size_t i = 0; i < 6; ++i) v[i] = detail::parse_real(toks[i], line_no);
        MapEntry entry{{v[0], v[1], v[2], v[3], v[4], v[5]}, std::nullopt};
        if (toks.size() == 7) {
            entry.weight = detail::parse_real(toks[6], line_no);
            if (!(*entry.weight > 0.0))
                throw ParseError(ParseErrorKind::MalformedLine, line_no, toks[6].column,
                                 "weight must be positive");
        }
        if (doc.maps.empty()) {
            first_map_line = line_no;
        } else if (entry.weight.has_value() != doc.has_weights()) {
            throw ParseError(ParseErrorKind::MalformedLine, line_no, toks.back().column,
                             "weights must be given on every map line or on none (first map line " +
                                 std::to_string(first_map_line) + ")");
        }
        doc.maps.push_back(entry);
    }

    if (doc.maps.empty()) throw ParseError(ParseErrorKind::EmptySystem, 0, 0, "no map lines");
    if (doc.has_weights()) {
        double total = 0.0;
        for (const auto& m : doc.maps) total += *m.weight;
        if (std::abs(total - 1.0) > IfsDocument::kWeightSumTolerance)
            throw ParseError(ParseErrorKind::BadWeightSum, 0, 0,
                             "weights sum to " + detail::shortest(total) + ", expected 1");
    }
    return doc;
}

/// Canonical text: directives (@name, @basis, @render) then one map per line.
inline std::string serialize_ifs(const IfsDocument& doc) {
    if (doc.name.find_first_of("\n\r#") != std::string::npos || detail::trim(doc.name) != doc.name)
        throw InvalidArgument("document name must be one trimmed line without '#'");
    std::string out;
    if (!doc.name.empty()) out += "@name " + doc.name + "\n";
    if (doc.basis) {
        out += "@basis";
        for (std::size_t i = 0; i < 3; ++i) {
            out += ' ';
            detail::append_real(out, (*doc.basis)[i].x);
            out += ' ';
            detail::append_real(out, (*doc.basis)[i].y);
        }
        out += '\n';
    }
    if (doc.render) {
        out += "@render " + std::to_string(doc.render->n_points) + ' ' +
               std::to_string(doc.render->burn_in) + ' ' + std::to_string(doc.render->seed) + '\n';
    }
    for (const auto& [m, weight] : doc.maps) {
        const double values[] = {m.a11, m.a12, m.a21, m.a22, m.b1, m.b2};
        for (std::size_t i = 0; i < 6; ++i) {
            if (i) out += ' ';
            detail::append_real(out, values[i]);
        }
        if (weight) {
            out += ' ';
            detail::append_real(out, *weight);
        }
        out += '\n';
    }
    return out;
}

}  // namespace ifsmod
