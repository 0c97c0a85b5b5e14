#pragma once

// Poem corpus handling: JSONL loading, text cleaning, deduplication,
// train/validation splitting and inter-annotator agreement.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tai/errors.hpp"

namespace tai::corpus {

using json = nlohmann::json;

// Metric names accepted in a record's external_scores map. These values
// come from neural evaluators run elsewhere; they are carried, never computed.
inline const std::set<std::string>& known_external_metrics() {
    static const std::set<std::string> k{"comet", "blip", "long_clip", "image_reward"};
    return k;
}

struct PoemRecord {
    std::string id;
    std::string language;
    std::optional<std::string> title;
    std::string text;
    std::optional<std::string> reference_translation;
    std::map<std::string, double> external_scores;
    json extra = json::object();  // unknown JSONL keys, passed through verbatim

    bool operator==(const PoemRecord&) const = default;
};

struct CleanReport {
    std::int64_t duplicates_removed = 0;
    std::int64_t html_tags_stripped = 0;
    std::int64_t whitespace_normalized = 0;

    CleanReport& operator+=(const CleanReport& o) {
        duplicates_removed += o.duplicates_removed;
        html_tags_stripped += o.html_tags_stripped;
        whitespace_normalized += o.whitespace_normalized;
        return *this;
    }
};

struct RatingPair {
    std::string item_id;
    std::string label_a;
    std::string label_b;
};

namespace detail {

inline bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\v' || c == '\f'; }

inline std::string encode_utf8(std::uint32_t cp) {
    std::string out;
    if (cp <= 0x7F) {
        out += static_cast<char>(cp);
    } else if (cp <= 0x7FF) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp <= 0xFFFF) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
    return out;
}

// Removes <...> elements. A '<' only opens a tag when followed by a letter,
// '/', '!' or '?' and a matching '>' exists; otherwise it stays literal text.
inline std::string strip_tags(const std::string& s, std::int64_t& removed) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        if (s[i] == '<' && i + 1 < s.size()) {
            char c = s[i + 1];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '/' || c == '!' || c == '?') {
                std::size_t close = s.find('>', i + 1);
                if (close != std::string::npos) {
                    ++removed;
                    i = close + 1;
                    continue;
                }
            }
        }
        out += s[i++];
    }
    return out;
}

// Decodes the named entities amp/lt/gt/quot/apos plus numeric &#d; / &#xh;.
inline std::string decode_entities(const std::string& s) {
    static const std::vector<std::pair<std::string, std::string>> named{
        {"amp", "&"}, {"lt", "<"}, {"gt", ">"}, {"quot", "\""}, {"apos", "'"}};
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        if (s[i] != '&') {
            out += s[i++];
            continue;
        }
        std::size_t semi = s.find(';', i + 1);
        if (semi == std::string::npos || semi == i + 1) {
            out += s[i++];
            continue;
        }
        std::string body = s.substr(i + 1, semi - i - 1);
        std::string decoded;
        bool ok = false;
        if (body[0] == '#') {
            std::uint32_t cp = 0;
            bool hex = body.size() > 1 && (body[1] == 'x' || body[1] == 'X');
            std::string digits = body.substr(hex ? 2 : 1);
            if (!digits.empty() && digits.size() <= 7) {
                ok = true;
                for (char d : digits) {
                    int v;
                    if (d >= '0' && d <= '9') v = d - '0';
                    else if (hex && d >= 'a' && d <= 'f') v = d - 'a' + 10;
                    else if (hex && d >= 'A' && d <= 'F') v = d - 'A' + 10;
                    else { ok = false; break; }
                    cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
                }
                if (ok && cp <= 0x10FFFF) decoded = encode_utf8(cp);
                else ok = false;
            }
        } else {
            for (const auto& [name, repl] : named) {
                if (body == name) {
                    decoded = repl;
                    ok = true;
                    break;
                }
            }
        }
        if (ok) {
            out += decoded;
            i = semi + 1;
        } else {
            out += s[i++];
        }
    }
    return out;
}

inline std::string normalize_whitespace(const std::string& s, std::int64_t& events) {
    std::string text = s;
    // line endings first
    std::string lf;
    lf.reserve(text.size());
    bool crlf_seen = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\r') {
            crlf_seen = true;
            if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
            lf += '\n';
        } else {
            lf += text[i];
        }
    }
    if (crlf_seen) ++events;

    std::vector<std::string> lines;
    std::string cur;
    for (char c : lf) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    lines.push_back(cur);

    for (auto& line : lines) {
        std::string collapsed;
        collapsed.reserve(line.size());
        for (std::size_t i = 0; i < line.size();) {
            if (is_blank(line[i])) {
                std::size_t j = i;
                while (j < line.size() && is_blank(line[j])) ++j;
                if (j - i > 1 || line[i] != ' ') ++events;
                collapsed += ' ';
                i = j;
            } else {
                collapsed += line[i++];
            }
        }
        if (!collapsed.empty() && collapsed.front() == ' ') {
            collapsed.erase(collapsed.begin());
            ++events;
        }
        if (!collapsed.empty() && collapsed.back() == ' ') {
            collapsed.pop_back();
            ++events;
        }
        line = std::move(collapsed);
    }

    // collapse runs of more than one blank line, drop boundary blanks
    std::vector<std::string> kept;
    std::size_t i = 0;
    while (i < lines.size()) {
        if (lines[i].empty()) {
            std::size_t j = i;
            while (j < lines.size() && lines[j].empty()) ++j;
            bool at_edge = kept.empty() || j == lines.size();
            if (at_edge) {
                if (j > i) ++events;
            } else {
                if (j - i > 1) ++events;
                kept.emplace_back();
            }
            i = j;
        } else {
            kept.push_back(lines[i++]);
        }
    }

    std::string out;
    for (std::size_t k = 0; k < kept.size(); ++k) {
        if (k) out += '\n';
        out += kept[k];
    }
    return out;
}

inline std::string ascii_casefold(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace detail

// Total cleaning function: tag removal and entity decoding run to a fixed
// point (so cleaning is idempotent even on doubly encoded input), then
// whitespace is normalized. Line breaks inside stanzas survive; runs of
// blank lines collapse to a single blank line.
inline std::pair<std::string, CleanReport> clean_text(const std::string& raw) {
    CleanReport report;
    std::string text = raw;
    for (;;) {
        std::string stripped = detail::strip_tags(text, report.html_tags_stripped);
        std::string decoded = detail::decode_entities(stripped);
        if (decoded == text) break;
        text = std::move(decoded);
    }
    std::string normalized = detail::normalize_whitespace(text, report.whitespace_normalized);
    return {std::move(normalized), report};
}

inline std::vector<PoemRecord> load_collection(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("corpus file not found: " + path.string());

    std::vector<PoemRecord> records;
    std::set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object())
            throw validation_error("malformed JSONL at line " + std::to_string(line_no) +
                                   " of " + path.filename().string());

        PoemRecord rec;
        for (const char* key : {"id", "language", "text"}) {
            if (!obj.contains(key) || !obj[key].is_string())
                throw validation_error("line " + std::to_string(line_no) +
                                       ": missing or non-string required key \"" + key + "\"");
        }
        rec.id = obj["id"].get<std::string>();
        rec.language = obj["language"].get<std::string>();
        rec.text = obj["text"].get<std::string>();
        if (rec.id.empty())
            throw validation_error("line " + std::to_string(line_no) + ": empty id");
        if (!seen_ids.insert(rec.id).second)
            throw validation_error("duplicate id \"" + rec.id + "\" at line " +
                                   std::to_string(line_no));
        if (obj.contains("title")) rec.title = obj["title"].get<std::string>();
        if (obj.contains("reference_translation"))
            rec.reference_translation = obj["reference_translation"].get<std::string>();
        if (obj.contains("external_scores")) {
            for (const auto& [k, v] : obj["external_scores"].items()) {
                if (!known_external_metrics().count(k))
                    throw validation_error("line " + std::to_string(line_no) +
                                           ": unknown external score key \"" + k + "\"");
                rec.external_scores[k] = v.get<double>();
            }
        }
        for (const auto& [k, v] : obj.items()) {
            if (k != "id" && k != "language" && k != "text" && k != "title" &&
                k != "reference_translation" && k != "external_scores")
                rec.extra[k] = v;
        }
        records.push_back(std::move(rec));
    }
    return records;
}

inline json record_to_json(const PoemRecord& rec) {
    json obj = rec.extra;
    obj["id"] = rec.id;
    obj["language"] = rec.language;
    obj["text"] = rec.text;
    if (rec.title) obj["title"] = *rec.title;
    if (rec.reference_translation) obj["reference_translation"] = *rec.reference_translation;
    if (!rec.external_scores.empty()) obj["external_scores"] = rec.external_scores;
    return obj;
}

inline void save_collection(const std::vector<PoemRecord>& records,
                            const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw validation_error("cannot write corpus file: " + path.string());
    for (const auto& rec : records) out << record_to_json(rec).dump() << '\n';
}

// Cleans every record's text in place; returns the summed cleaning report.
inline CleanReport clean_collection(std::vector<PoemRecord>& records) {
    CleanReport total;
    for (auto& rec : records) {
        auto [text, report] = clean_text(rec.text);
        rec.text = std::move(text);
        total += report;
    }
    return total;
}

// Keeps the first occurrence of each text, comparing case-folded
// whitespace-normalized bytes. Exact-match only; no fuzzy matching.
inline std::pair<std::vector<PoemRecord>, CleanReport> deduplicate(
    const std::vector<PoemRecord>& records) {
    CleanReport report;
    std::vector<PoemRecord> kept;
    std::set<std::string> seen;
    for (const auto& rec : records) {
        std::int64_t ignored = 0;
        std::string key =
            detail::ascii_casefold(detail::normalize_whitespace(rec.text, ignored));
        if (seen.insert(key).second)
            kept.push_back(rec);
        else
            ++report.duplicates_removed;
    }
    return {std::move(kept), report};
}

// Deterministic Fisher-Yates driven by mt19937_64 so the permutation is
// identical across platforms (std::shuffle is implementation-defined).
inline std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::mt19937_64 rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

inline std::pair<std::vector<PoemRecord>, std::vector<PoemRecord>> split(
    const std::vector<PoemRecord>& records, double train_fraction, std::uint64_t seed) {
    if (records.empty()) throw validation_error("split: empty collection");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw validation_error("split: train fraction must lie in (0,1)");
    auto idx = shuffled_indices(records.size(), seed);
    auto train_size = static_cast<std::size_t>(train_fraction * static_cast<double>(records.size()));
    std::vector<PoemRecord> train, validation;
    for (std::size_t i = 0; i < idx.size(); ++i)
        (i < train_size ? train : validation).push_back(records[idx[i]]);
    return {std::move(train), std::move(validation)};
}

// Cohen's kappa over two raters' labels, computed with integer counts so the
// boundary cases (perfect agreement, perfect disagreement) come out exact.
// Returns 1.0 by convention when chance agreement is 1 (single shared label).
inline double cohen_kappa(const std::vector<RatingPair>& pairs) {
    if (pairs.empty()) throw validation_error("cohen_kappa: no rating pairs");
    std::map<std::string, std::int64_t> count_a, count_b;
    std::int64_t agree = 0;
    for (const auto& p : pairs) {
        ++count_a[p.label_a];
        ++count_b[p.label_b];
        if (p.label_a == p.label_b) ++agree;
    }
    const auto n = static_cast<std::int64_t>(pairs.size());
    std::int64_t chance = 0;  // sum over labels of n_a(k) * n_b(k)
    for (const auto& [label, na] : count_a) {
        auto it = count_b.find(label);
        if (it != count_b.end()) chance += na * it->second;
    }
    const std::int64_t denom = n * n - chance;
    if (denom == 0) return 1.0;
    return static_cast<double>(agree * n - chance) / static_cast<double>(denom);
}

}  // namespace tai::corpus
