#include "gda/textpipe.hpp"

#include "gda/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <thread>

namespace gda {

Stoplist Stoplist::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open stoplist " + path.string());
    Stoplist out;
    std::string line, current;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        std::string word = line.substr(b, e - b + 1);
        if (word.front() == '[' && word.back() == ']') {
            current = word.substr(1, word.size() - 2);
            continue;
        }
        if (current.empty())
            throw InputError(path.string() + ":" + std::to_string(lineno) + ": word before any [class]");
        std::string lowered;
        for (const char32_t cp : decode_utf8(word)) append_utf8(lowered, to_lower(cp));
        out.word_class.emplace(std::move(lowered), current);
    }
    return out;
}

void Stoplist::merge(const Stoplist& other) {
    for (const auto& [w, c] : other.word_class) word_class.emplace(w, c);
}

std::set<std::string> Stoplist::classes() const {
    std::set<std::string> out;
    for (const auto& [w, c] : word_class) out.insert(c);
    return out;
}

Stoplist load_stoplists(const std::filesystem::path& dir, const std::vector<std::string>& languages) {
    Stoplist out;
    for (const auto& lang : languages) out.merge(Stoplist::load(dir / (lang + ".txt")));
    return out;
}

const char* to_string(DropReason r) {
    switch (r) {
        case DropReason::script: return "script";
        case DropReason::stopword: return "stopword";
        case DropReason::rare: return "rare";
        case DropReason::empty_segment: return "empty-segment";
    }
    return "?";
}

namespace {

bool is_apostrophe(char32_t cp) {
    return cp == U'\'' || cp == 0x2019;
}

}  // namespace

TokenStream tokenize(std::string_view text, const FilterPolicy& policy) {
    const std::u32string cps = decode_utf8(text);
    TokenStream out;
    std::string token;
    Script blocked = Script::none;  // first disallowed script seen in the current token

    const auto flush = [&] {
        if (token.empty()) return;
        if (blocked == Script::none)
            out.tokens.push_back(std::move(token));
        else
            out.rejected.push_back({std::move(token), blocked});
        token.clear();
        blocked = Script::none;
    };

    for (std::size_t i = 0; i < cps.size(); ++i) {
        const char32_t cp = cps[i];
        const Script s = script_of(cp);
        if (s == Script::none) {
            const bool inner_apostrophe = is_apostrophe(cp) && !token.empty() && i + 1 < cps.size() &&
                                          script_of(cps[i + 1]) != Script::none;
            if (inner_apostrophe) {
                token.push_back('\'');
                continue;
            }
            flush();
            continue;
        }
        if (s == Script::inherited && token.empty()) continue;  // stray combining mark
        if (s != Script::inherited && blocked == Script::none && !policy.scripts.empty() &&
            !policy.scripts.count(s))
            blocked = s;
        append_utf8(token, policy.lowercase ? to_lower(cp) : cp);
    }
    flush();
    return out;
}

std::size_t SegmentedCorpus::token_count() const {
    std::size_t n = 0;
    for (const auto& seg : segments)
        for (const auto& [t, c] : seg.counts) n += c;
    return n;
}

SegmentedCorpus build_corpus(const std::vector<RawSegment>& raw, const FilterPolicy& policy,
                             unsigned threads) {
    {
        std::set<std::string> ids;
        for (const auto& r : raw)
            if (!ids.insert(r.id).second) throw InputError("duplicate segment id '" + r.id + "'");
    }
    std::vector<TokenStream> streams(raw.size());
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(raw.size())));
    if (workers <= 1) {
        for (std::size_t i = 0; i < raw.size(); ++i) streams[i] = tokenize(raw[i].text, policy);
    } else {
        // Strided assignment; each stream lands in its own slot so the merge
        // below sees the same data whatever the scheduling.
        std::vector<std::exception_ptr> errors(workers);
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w)
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t i = w; i < raw.size(); i += workers)
                            streams[i] = tokenize(raw[i].text, policy);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
        }
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    SegmentedCorpus corpus;
    std::map<std::string, Script> rejected;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        Segment seg{raw[i].id, {}};
        for (auto& t : streams[i].tokens) {
            ++corpus.vocabulary[t];
            ++seg.counts[std::move(t)];
        }
        for (auto& r : streams[i].rejected) rejected.emplace(std::move(r.token), r.script);
        corpus.segments.push_back(std::move(seg));
    }
    for (const auto& [term, script] : rejected)
        corpus.filter_log.push_back({term, DropReason::script, to_string(script)});

    for (const auto& [term, freq] : corpus.vocabulary) corpus.retained.push_back(term);
    std::stable_sort(corpus.retained.begin(), corpus.retained.end(), [&](const auto& a, const auto& b) {
        return corpus.vocabulary.at(a) > corpus.vocabulary.at(b);
    });
    return corpus;
}

SegmentedCorpus apply_filter(SegmentedCorpus corpus, const FilterPolicy& policy) {
    std::set<std::string> dropped;
    std::vector<std::string> kept;
    for (const auto& term : corpus.retained) {
        std::string lowered;
        for (const char32_t cp : decode_utf8(term)) append_utf8(lowered, to_lower(cp));
        const auto sw = policy.stoplist.word_class.find(lowered);
        if (sw != policy.stoplist.word_class.end() && policy.stopword_classes.count(sw->second)) {
            corpus.filter_log.push_back({term, DropReason::stopword, sw->second});
            dropped.insert(term);
            continue;
        }
        const std::size_t freq = corpus.vocabulary.at(term);
        if (freq < policy.min_occurrences) {
            corpus.filter_log.push_back({term, DropReason::rare, std::to_string(freq)});
            dropped.insert(term);
            continue;
        }
        kept.push_back(term);
    }
    corpus.retained = std::move(kept);

    std::vector<Segment> segments;
    for (auto& seg : corpus.segments) {
        std::erase_if(seg.counts, [&](const auto& kv) { return dropped.count(kv.first) > 0; });
        if (seg.counts.empty() && !policy.keep_empty_segments) {
            corpus.filter_log.push_back({seg.id, DropReason::empty_segment, ""});
            continue;
        }
        segments.push_back(std::move(seg));
    }
    corpus.segments = std::move(segments);
    return corpus;
}

Crosstab crosstab(const SegmentedCorpus& corpus, CrosstabMode mode) {
    if (corpus.retained.empty())
        throw InputError("no terms survive filtering; lower --min-occurrences or relax the stopword classes");
    if (corpus.segments.empty()) throw InputError("corpus has no segments");
    std::map<std::string, Eigen::Index> column;
    for (std::size_t j = 0; j < corpus.retained.size(); ++j)
        column.emplace(corpus.retained[j], static_cast<Eigen::Index>(j));

    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(corpus.segments.size()),
                                              static_cast<Eigen::Index>(corpus.retained.size()));
    std::vector<std::string> ids;
    std::vector<std::string> zero_rows;
    for (std::size_t i = 0; i < corpus.segments.size(); ++i) {
        const Segment& seg = corpus.segments[i];
        ids.push_back(seg.id);
        bool any = false;
        for (const auto& [term, count] : seg.counts) {
            const auto it = column.find(term);
            if (it == column.end() || count == 0) continue;
            m(static_cast<Eigen::Index>(i), it->second) =
                mode == CrosstabMode::presence ? 1.0 : static_cast<double>(count);
            any = true;
        }
        if (!any) zero_rows.push_back(seg.id);
    }
    return {ContingencyTable(std::move(ids), corpus.retained, std::move(m)), std::move(zero_rows)};
}

std::vector<RawSegment> segment_files(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw InputError(dir.string() + " is not a directory");
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end(),
              [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });
    std::vector<RawSegment> out;
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        if (!in) throw InputError("cannot read " + f.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        out.push_back({f.filename().string(), ss.str()});
    }
    return out;
}

namespace {

std::string padded(std::size_t n, std::size_t width) {
    std::string s = std::to_string(n);
    if (s.size() < width) s.insert(0, width - s.size(), '0');
    return s;
}

}  // namespace

std::vector<RawSegment> segment_by_marker(std::string_view text, std::string_view marker,
                                          bool separate_preamble) {
    if (marker.empty()) throw InputError("segment marker must not be empty");
    std::vector<std::size_t> starts;  // byte offsets of marker lines
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        const std::string_view line = text.substr(pos, eol - pos);
        const auto first = line.find_first_not_of(" \t");
        if (first != std::string_view::npos && line.substr(first).starts_with(marker)) starts.push_back(pos);
        if (eol == text.size()) break;
        pos = eol + 1;
    }

    std::vector<RawSegment> out;
    if (starts.empty()) {
        out.push_back({std::string(marker) + "-1", std::string(text)});
        return out;
    }
    const std::size_t width = std::to_string(starts.size()).size();
    if (separate_preamble) out.push_back({"preamble", std::string(text.substr(0, starts.front()))});
    for (std::size_t k = 0; k < starts.size(); ++k) {
        const std::size_t b = (k == 0 && !separate_preamble) ? 0 : starts[k];
        const std::size_t e = k + 1 < starts.size() ? starts[k + 1] : text.size();
        out.push_back({std::string(marker) + "-" + padded(k + 1, width), std::string(text.substr(b, e - b))});
    }
    return out;
}

namespace {

int parse_digits(std::string_view s, std::size_t at, std::size_t n, std::string_view whole) {
    if (at + n > s.size()) throw InputError("unparseable timestamp '" + std::string(whole) + "'");
    int v = 0;
    for (std::size_t i = at; i < at + n; ++i) {
        if (s[i] < '0' || s[i] > '9') throw InputError("unparseable timestamp '" + std::string(whole) + "'");
        v = v * 10 + (s[i] - '0');
    }
    return v;
}

void expect(std::string_view s, std::size_t at, char c, std::string_view whole) {
    if (at >= s.size() || s[at] != c) throw InputError("unparseable timestamp '" + std::string(whole) + "'");
}

}  // namespace

std::chrono::sys_days parse_utc_day(std::string_view ts) {
    using namespace std::chrono;
    const int y = parse_digits(ts, 0, 4, ts);
    expect(ts, 4, '-', ts);
    const int mo = parse_digits(ts, 5, 2, ts);
    expect(ts, 7, '-', ts);
    const int d = parse_digits(ts, 8, 2, ts);
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw InputError("invalid date in timestamp '" + std::string(ts) + "'");
    if (ts.size() == 10) return sys_days{ymd};

    if (ts[10] != 'T' && ts[10] != ' ') throw InputError("unparseable timestamp '" + std::string(ts) + "'");
    const int hh = parse_digits(ts, 11, 2, ts);
    expect(ts, 13, ':', ts);
    const int mm = parse_digits(ts, 14, 2, ts);
    std::size_t at = 16;
    int ss = 0;
    if (at < ts.size() && ts[at] == ':') {
        ss = parse_digits(ts, at + 1, 2, ts);
        at += 3;
        if (at < ts.size() && (ts[at] == '.' || ts[at] == ',')) {
            ++at;
            const std::size_t frac = at;
            while (at < ts.size() && ts[at] >= '0' && ts[at] <= '9') ++at;
            if (at == frac) throw InputError("unparseable timestamp '" + std::string(ts) + "'");
        }
    }
    if (hh > 23 || mm > 59 || ss > 60) throw InputError("invalid time in timestamp '" + std::string(ts) + "'");
    int offset_min = 0;
    if (at < ts.size()) {
        if (ts[at] == 'Z' && at + 1 == ts.size()) {
            ++at;
        } else if (ts[at] == '+' || ts[at] == '-') {
            const int sign = ts[at] == '+' ? 1 : -1;
            const int oh = parse_digits(ts, at + 1, 2, ts);
            std::size_t next = at + 3;
            if (next < ts.size() && ts[next] == ':') ++next;
            const int om = parse_digits(ts, next, 2, ts);
            offset_min = sign * (oh * 60 + om);
            at = next + 2;
        }
        if (at != ts.size()) throw InputError("unparseable timestamp '" + std::string(ts) + "'");
    }
    const auto local = sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss};
    return floor<days>(local - minutes{offset_min});
}

std::vector<RawSegment> segment_by_day(const std::vector<TimedRecord>& records, bool keep_empty_days) {
    using namespace std::chrono;
    std::map<sys_days, std::string> by_day;
    for (std::size_t i = 0; i < records.size(); ++i) {
        sys_days day;
        try {
            day = parse_utc_day(records[i].timestamp);
        } catch (const InputError& e) {
            throw InputError("record " + std::to_string(i) + ": " + e.what());
        }
        auto& text = by_day[day];
        if (!text.empty()) text += '\n';
        text += records[i].text;
    }
    std::vector<RawSegment> out;
    if (by_day.empty()) return out;
    const auto label = [](sys_days d) {
        const year_month_day ymd{d};
        return padded(static_cast<std::size_t>(static_cast<int>(ymd.year())), 4) + "-" +
               padded(static_cast<unsigned>(ymd.month()), 2) + "-" + padded(static_cast<unsigned>(ymd.day()), 2);
    };
    for (sys_days d = by_day.begin()->first; d <= by_day.rbegin()->first; d += days{1}) {
        const auto it = by_day.find(d);
        if (it == by_day.end() && !keep_empty_days) continue;
        out.push_back({label(d), it == by_day.end() ? std::string() : it->second});
    }
    return out;
}

}  // namespace gda
