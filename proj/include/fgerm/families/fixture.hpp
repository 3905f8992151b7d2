#pragma once

// Reader for the group-witness fixture text written by to_fixture_text.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "fgerm/error.hpp"
#include "fgerm/families/h0.hpp"
#include "fgerm/parser.hpp"

namespace fgerm::families
{

inline GroupWitness parse_group_witness(std::string_view text)
{
    GroupWitness w;
    bool have_dim = false;
    bool have_order = false;
    std::size_t line_no = 0;
    std::size_t start = 0;
    auto trim = [](std::string_view s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string_view::npos) {
            return std::string_view{};
        }
        return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
    };
    while (start < text.size()) {
        std::size_t stop = text.find('\n', start);
        if (stop == std::string_view::npos) {
            stop = text.size();
        }
        ++line_no;
        const std::string_view line = trim(text.substr(start, stop - start));
        start = stop + 1;
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto space = line.find(' ');
        const std::string_view key = line.substr(0, space);
        const std::string_view rest = space == std::string_view::npos ? std::string_view{} : trim(line.substr(space));
        try {
            if (key == "dim") {
                w.dim = std::stoul(std::string(rest));
                have_dim = true;
            } else if (key == "order") {
                w.order = TruncationOrder(std::stoi(std::string(rest)));
                have_order = true;
            } else if (key == "gen") {
                if (!have_dim) {
                    throw parse_error("'gen' before 'dim'", line_no, 1);
                }
                std::vector<std::string> parts;
                std::string item;
                std::istringstream in{std::string(rest)};
                while (std::getline(in, item, ';')) {
                    parts.push_back(item);
                }
                if (parts.size() != 2 * (w.dim - 1) + 2) {
                    throw parse_error("expected " + std::to_string(2 * (w.dim - 1) + 2) + " ';'-separated entries",
                                      line_no, 1);
                }
                H0Params p;
                for (std::size_t j = 0; j + 1 < w.dim; ++j) {
                    p.a.push_back(parse::lower_poly(*parse::parse_expression(parts[2 * j], line_no), w.dim));
                    p.b.push_back(parse::lower_poly(*parse::parse_expression(parts[2 * j + 1], line_no), w.dim));
                }
                p.lambda = parse::parse_scalar(parts[parts.size() - 2]);
                p.mu = parse::parse_scalar(parts.back());
                w.generators.push_back(std::move(p));
            } else if (key == "word") {
                w.words.push_back(parse::parse_word(rest, line_no));
            } else {
                throw parse_error("unknown key '" + std::string(key) + "'", line_no, 1);
            }
        } catch (const std::logic_error &) {
            throw parse_error("malformed line", line_no, 1);
        }
    }
    if (!have_dim || !have_order) {
        throw parse_error("fixture needs 'dim' and 'order' lines", line_no == 0 ? 1 : line_no, 1);
    }
    return w;
}

inline GroupWitness read_group_witness(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in) {
        throw precondition_violation("cannot open fixture " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_group_witness(buf.str());
}

/// Checks a fixture: some word of maximal depth d is nontrivial (length
/// >= d + 1), every word of depth >= 1 is tangent to the identity, and the
/// certified bound stays within 2n.
inline std::vector<VerificationReport> verify_group_fixture(const GroupWitness &w)
{
    const auto gens = build_H0_generators(w.dim, w.generators, w.order);
    std::size_t depth = 0;
    for (const auto &word : w.words) {
        depth = std::max(depth, word.depth());
    }
    std::vector<CommutatorWord> top;
    for (const auto &word : w.words) {
        if (word.depth() == depth) {
            top.push_back(word);
        }
    }
    std::vector<VerificationReport> out;
    out.push_back(verify_group_length_witness(gens, depth, top));
    out.push_back(verify_derived_unipotence(gens, w.words));
    const bool certified = out.front().passed();
    out.push_back(run_claim("group.length-bound", out.front().parameters, [&](VerificationReport &r) {
        r.status = !certified || depth + 1 <= 2 * w.dim ? Status::pass : Status::fail;
        r.witness = "certified >= " + std::to_string(certified ? depth + 1 : 0) + ", bound " +
                    std::to_string(2 * w.dim);
    }));
    return out;
}

} // namespace fgerm::families
