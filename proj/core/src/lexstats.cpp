#include "augopt/lexstats.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "augopt/errors.hpp"

namespace augopt {
namespace {

bool is_ascii_space(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
}

bool is_unicode_space(char32_t cp) {
    if (cp < 0x80) return is_ascii_space(static_cast<unsigned char>(cp));
    switch (cp) {
        case 0x00A0:
        case 0x1680:
        case 0x2028:
        case 0x2029:
        case 0x202F:
        case 0x205F:
        case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

// Decode one codepoint at i; advances i past it. Invalid bytes are
// returned as-is (one byte) so malformed input degrades instead of
// crashing; load paths validate UTF-8 up front.
char32_t decode_utf8(const std::string& s, std::size_t& i) {
    unsigned char c0 = static_cast<unsigned char>(s[i]);
    if (c0 < 0x80) {
        ++i;
        return c0;
    }
    int len = 0;
    char32_t cp = 0;
    if ((c0 & 0xE0) == 0xC0) {
        len = 2;
        cp = c0 & 0x1F;
    } else if ((c0 & 0xF0) == 0xE0) {
        len = 3;
        cp = c0 & 0x0F;
    } else if ((c0 & 0xF8) == 0xF0) {
        len = 4;
        cp = c0 & 0x07;
    } else {
        ++i;
        return c0;
    }
    if (i + len > s.size()) {
        ++i;
        return c0;
    }
    for (int k = 1; k < len; ++k) {
        unsigned char cc = static_cast<unsigned char>(s[i + k]);
        if ((cc & 0xC0) != 0x80) {
            ++i;
            return c0;
        }
        cp = (cp << 6) | (cc & 0x3F);
    }
    i += len;
    return cp;
}

bool is_ascii_punct(unsigned char c) {
    return c < 0x80 && std::ispunct(c) != 0;
}

void push_token(TokenSeq& out, std::string raw) {
    std::size_t b = 0, e = raw.size();
    while (b < e && is_ascii_punct(static_cast<unsigned char>(raw[b]))) ++b;
    while (e > b && is_ascii_punct(static_cast<unsigned char>(raw[e - 1]))) --e;
    if (e > b) out.emplace_back(raw.substr(b, e - b));
}

}  // namespace

bool is_valid_utf8(const std::string& bytes) {
    std::size_t i = 0;
    const std::size_t n = bytes.size();
    while (i < n) {
        unsigned char c = static_cast<unsigned char>(bytes[i]);
        if (c < 0x80) {
            ++i;
            continue;
        }
        int len;
        char32_t cp;
        if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return false;
        }
        if (i + len > n) return false;
        for (int k = 1; k < len; ++k) {
            unsigned char cc = static_cast<unsigned char>(bytes[i + k]);
            if ((cc & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (cc & 0x3F);
        }
        // overlong forms, surrogates, out of range
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
            (len == 4 && cp < 0x10000) || cp > 0x10FFFF ||
            (cp >= 0xD800 && cp <= 0xDFFF)) {
            return false;
        }
        i += len;
    }
    return true;
}

TokenSeq tokenize(const std::string& text) {
    TokenSeq out;
    std::string cur;
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t start = i;
        char32_t cp = decode_utf8(text, i);
        if (is_unicode_space(cp)) {
            if (!cur.empty()) {
                push_token(out, std::move(cur));
                cur.clear();
            }
        } else {
            if (cp < 0x80) {
                cur.push_back(static_cast<char>(
                    std::tolower(static_cast<unsigned char>(cp))));
            } else {
                cur.append(text, start, i - start);
            }
        }
    }
    if (!cur.empty()) push_token(out, std::move(cur));
    return out;
}

std::string detokenize(const TokenSeq& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

std::vector<std::pair<std::string, double>> make_keyword_pool(
    const std::unordered_map<std::string, double>& idf,
    const std::unordered_map<std::string, std::int64_t>& freq) {
    std::vector<std::pair<std::string, double>> pool;
    pool.reserve(freq.size());
    double max_raw = 0.0;
    for (const auto& [tok, f] : freq) {
        auto it = idf.find(tok);
        double raw = (it == idf.end() ? 0.0 : it->second) *
                     static_cast<double>(f);
        pool.emplace_back(tok, raw);
        max_raw = std::max(max_raw, raw);
    }
    if (max_raw > 0.0) {
        for (auto& [tok, s] : pool) s /= max_raw;
    }
    std::sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return pool;
}

TfIdfTable build_tfidf(const std::vector<TokenSeq>& docs) {
    TfIdfTable table;
    std::unordered_map<std::string, std::int64_t> df, freq;
    for (const auto& doc : docs) {
        std::unordered_map<std::string, bool> seen;
        for (const auto& tok : doc) {
            ++freq[tok];
            if (!seen[tok]) {
                seen[tok] = true;
                ++df[tok];
            }
        }
    }
    const double d = static_cast<double>(docs.size());
    for (const auto& [tok, n] : df) {
        table.idf[tok] =
            std::log((1.0 + d) / (1.0 + static_cast<double>(n))) + 1.0;
    }
    table.keyword_pool = make_keyword_pool(table.idf, freq);
    table.pool_index.reserve(table.keyword_pool.size());
    for (std::size_t i = 0; i < table.keyword_pool.size(); ++i) {
        table.pool_index[table.keyword_pool[i].first] = i;
    }
    table.corpus_max_score = table.keyword_pool.empty()
                                 ? 0.0
                                 : table.keyword_pool.front().second;
    return table;
}

const std::vector<std::string>& Thesaurus::synonyms(
    const std::string& token) const {
    static const std::vector<std::string> kEmpty;
    auto it = entries.find(token);
    return it == entries.end() ? kEmpty : it->second;
}

Thesaurus load_thesaurus(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("thesaurus: cannot open " + path);
    Thesaurus th;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!is_valid_utf8(line)) {
            throw DataError("thesaurus: invalid UTF-8 at " + path + ":" +
                            std::to_string(line_no));
        }
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0) {
            throw DataError("thesaurus: malformed line at " + path + ":" +
                            std::to_string(line_no));
        }
        std::string key = line.substr(0, tab);
        for (auto& c : key) c = static_cast<char>(
            std::tolower(static_cast<unsigned char>(c)));
        std::vector<std::string> syns;
        std::stringstream ss(line.substr(tab + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            for (auto& c : item) c = static_cast<char>(
                std::tolower(static_cast<unsigned char>(c)));
            if (!item.empty() && item != key &&
                std::find(syns.begin(), syns.end(), item) == syns.end()) {
                syns.push_back(item);
            }
        }
        if (syns.empty()) continue;  // nothing usable on this line
        if (th.entries.count(key)) {
            th.warnings.push_back("duplicate key '" + key + "' at " + path +
                                  ":" + std::to_string(line_no) +
                                  "; keeping last");
        }
        th.entries[key] = std::move(syns);
    }
    return th;
}

void save_tfidf_tsv(const TfIdfTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("tfidf: cannot write " + path);
    for (const auto& [tok, score] : table.keyword_pool) {
        out << tok << '\t' << table.idf_of(tok) << '\t' << score << '\n';
    }
}

}  // namespace augopt
