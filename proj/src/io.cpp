#include "gda/io.hpp"

#include "gda/error.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unistd.h>

namespace gda {

namespace fs = std::filesystem;

std::vector<CsvRow> parse_csv(std::string_view text) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    std::vector<CsvRow> rows;
    CsvRow row;
    std::string field;
    bool quoted = false, in_quotes = false, any = false;
    std::size_t line = 1, record_line = 1;

    const auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        quoted = false;
    };
    const auto end_record = [&] {
        end_field();
        if (!(row.size() == 1 && row[0].empty() && !any)) rows.push_back(std::move(row));
        row.clear();
        any = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (ch == '\n') ++line;
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
        case '"':
            if (!field.empty() || quoted)
                throw InputError("CSV line " + std::to_string(line) + ": stray quote inside a field");
            in_quotes = quoted = any = true;
            break;
        case ',':
            end_field();
            any = true;
            break;
        case '\r':
            if (i + 1 < text.size() && text[i + 1] == '\n') break;
            [[fallthrough]];
        case '\n':
            end_record();
            record_line = ++line;
            break;
        default:
            if (quoted)
                throw InputError("CSV line " + std::to_string(line) + ": text after closing quote");
            field.push_back(ch);
            any = true;
        }
    }
    if (in_quotes) throw InputError("CSV line " + std::to_string(record_line) + ": unterminated quote");
    if (any || !field.empty()) end_record();
    return rows;
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

std::string csv_line(const CsvRow& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += csv_field(fields[i]);
    }
    out.push_back('\n');
    return out;
}

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw InputError("not a number: '" + std::string(s) + "'");
    return x;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write '" + path.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw InputError("write failed for '" + path.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw InputError("cannot replace '" + path.string() + "'");
    }
}

ContingencyTable parse_table_csv(std::string_view text) {
    const auto rows = parse_csv(text);
    if (rows.size() < 2) throw InputError("table CSV needs a header row and at least one data row");
    const CsvRow& header = rows[0];
    if (header.size() < 2) throw InputError("table CSV header needs at least one column label");
    if (!header[0].empty()) throw InputError("table CSV: top-left cell must be empty");

    std::vector<std::string> cols(header.begin() + 1, header.end());
    std::set<std::string> seen;
    for (std::size_t j = 0; j < cols.size(); ++j)
        if (!seen.insert(cols[j]).second)
            throw InputError("table CSV: duplicate column label '" + cols[j] + "' (column " + std::to_string(j + 2) + ")");

    std::vector<std::string> labels;
    Eigen::MatrixXd counts(static_cast<Eigen::Index>(rows.size() - 1), static_cast<Eigen::Index>(cols.size()));
    seen.clear();
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const CsvRow& row = rows[r];
        const std::string where = "table CSV row " + std::to_string(r + 1);
        if (row.size() != header.size())
            throw InputError(where + ": expected " + std::to_string(header.size()) + " fields, found " +
                             std::to_string(row.size()));
        if (!seen.insert(row[0]).second) throw InputError(where + ": duplicate row label '" + row[0] + "'");
        labels.push_back(row[0]);
        for (std::size_t j = 1; j < row.size(); ++j) {
            const std::string cell = where + ", column " + std::to_string(j + 1) + " ('" + cols[j - 1] + "')";
            double v = 0.0;
            try {
                v = parse_double(row[j]);
            } catch (const InputError&) {
                throw InputError(cell + ": not a number: '" + row[j] + "'");
            }
            if (!std::isfinite(v) || v < 0.0) throw InputError(cell + ": negative or non-finite value " + row[j]);
            counts(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(j - 1)) = v;
        }
    }
    return ContingencyTable(std::move(labels), std::move(cols), std::move(counts));
}

ContingencyTable load_table(const fs::path& path) {
    return parse_table_csv(read_file(path));
}

std::string table_to_csv(const ContingencyTable& table) {
    CsvRow header{""};
    header.insert(header.end(), table.col_labels().begin(), table.col_labels().end());
    std::string out = csv_line(header);
    for (Eigen::Index i = 0; i < table.rows(); ++i) {
        CsvRow row{table.row_labels()[static_cast<std::size_t>(i)]};
        for (Eigen::Index j = 0; j < table.cols(); ++j) row.push_back(format_double(table.counts()(i, j)));
        out += csv_line(row);
    }
    return out;
}

CategoricalDataset parse_categorical_csv(std::string_view text) {
    const auto rows = parse_csv(text);
    if (rows.empty()) throw InputError("categorical CSV is empty");
    const CsvRow& header = rows[0];
    if (header.size() < 2) throw InputError("categorical CSV needs an id column and at least one question");
    const std::size_t nq = header.size() - 1;

    CategoricalDataset ds;
    ds.questions.resize(nq);
    for (std::size_t q = 0; q < nq; ++q) ds.questions[q].label = header[q + 1];

    std::size_t first = 1;
    if (rows.size() > 1 && rows[1].size() == header.size()) {
        const CsvRow& r = rows[1];
        const bool roles = std::all_of(r.begin() + 1, r.end(), [](const std::string& s) {
            return s == "principal" || s == "supplementary";
        });
        if (roles) {
            for (std::size_t q = 0; q < nq; ++q)
                ds.questions[q].role = r[q + 1] == "principal" ? VariableRole::principal : VariableRole::supplementary;
            first = 2;
        }
    }

    std::vector<std::set<std::string>> cats(nq);
    for (std::size_t r = first; r < rows.size(); ++r) {
        if (rows[r].size() != header.size())
            throw InputError("categorical CSV row " + std::to_string(r + 1) + ": expected " +
                             std::to_string(header.size()) + " fields, found " + std::to_string(rows[r].size()));
        for (std::size_t q = 0; q < nq; ++q)
            if (!rows[r][q + 1].empty()) cats[q].insert(rows[r][q + 1]);
    }
    for (std::size_t q = 0; q < nq; ++q) ds.questions[q].categories.assign(cats[q].begin(), cats[q].end());

    std::set<std::string> ids;
    for (std::size_t r = first; r < rows.size(); ++r) {
        if (!ids.insert(rows[r][0]).second)
            throw InputError("categorical CSV row " + std::to_string(r + 1) + ": duplicate id '" + rows[r][0] + "'");
        ds.individual_ids.push_back(rows[r][0]);
        std::vector<int> resp(nq, kMissingResponse);
        for (std::size_t q = 0; q < nq; ++q) {
            const std::string& v = rows[r][q + 1];
            if (v.empty()) continue;
            const auto& c = ds.questions[q].categories;
            resp[q] = static_cast<int>(std::lower_bound(c.begin(), c.end(), v) - c.begin());
        }
        ds.responses.push_back(std::move(resp));
    }
    if (ds.individual_ids.empty()) throw InputError("categorical CSV has no individuals");
    ds.validate();
    return ds;
}

CategoricalDataset load_categorical(const fs::path& path) {
    return parse_categorical_csv(read_file(path));
}

std::vector<TimedRecord> parse_tweet_csv(std::string_view text) {
    const auto rows = parse_csv(text);
    if (rows.empty() || rows[0] != CsvRow{"timestamp", "text"})
        throw InputError("tweet CSV header must be 'timestamp,text'");
    std::vector<TimedRecord> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != 2)
            throw InputError("tweet CSV row " + std::to_string(r + 1) + ": expected 2 fields, found " +
                             std::to_string(rows[r].size()));
        out.push_back({rows[r][0], rows[r][1]});
    }
    return out;
}

std::vector<TimedRecord> load_tweets(const fs::path& path) {
    return parse_tweet_csv(read_file(path));
}

std::string coords_to_csv(const std::vector<std::string>& labels, const Eigen::MatrixXd& coords) {
    CsvRow header{"label"};
    for (Eigen::Index k = 0; k < coords.cols(); ++k) header.push_back("dim" + std::to_string(k + 1));
    std::string out = csv_line(header);
    for (std::size_t p = 0; p < labels.size(); ++p) {
        CsvRow row{labels[p]};
        for (Eigen::Index k = 0; k < coords.cols(); ++k)
            row.push_back(format_double(coords(static_cast<Eigen::Index>(p), k)));
        out += csv_line(row);
    }
    return out;
}

std::string trajectories_to_csv(const std::vector<Trajectory>& trajectories) {
    std::string out = csv_line({"term", "segment", "distance"});
    for (const auto& t : trajectories)
        for (std::size_t s = 0; s < t.segments.size(); ++s)
            out += csv_line({t.term, t.segments[s], format_double(t.distances[s])});
    return out;
}

std::string impacts_to_csv(const std::vector<ImpactRecord>& impacts) {
    CsvRow header{"group", "initiator", "distance", "inertia", "initiator_in_group"};
    const Eigen::Index k = impacts.empty() ? 0 : impacts.front().centroid.size();
    for (Eigen::Index d = 0; d < k; ++d) header.push_back("dim" + std::to_string(d + 1));
    std::string out = csv_line(header);
    for (const auto& r : impacts) {
        CsvRow row{r.group, r.initiator, format_double(r.distance), format_double(r.inertia),
                   r.initiator_in_group ? "true" : "false"};
        for (Eigen::Index d = 0; d < r.centroid.size(); ++d) row.push_back(format_double(r.centroid(d)));
        out += csv_line(row);
    }
    return out;
}

std::string filter_log_to_csv(const std::vector<FilterRecord>& log) {
    std::string out = csv_line({"item", "reason", "detail"});
    for (const auto& r : log) out += csv_line({r.item, to_string(r.reason), r.detail});
    return out;
}

std::vector<std::pair<std::string, std::vector<std::string>>> parse_pairs_csv(std::string_view text,
                                                                              std::string_view key_header,
                                                                              std::string_view value_header) {
    const auto rows = parse_csv(text);
    if (rows.empty() || rows[0].size() != 2 || rows[0][0] != key_header || rows[0][1] != value_header)
        throw InputError("expected header '" + std::string(key_header) + "," + std::string(value_header) + "'");
    std::vector<std::pair<std::string, std::vector<std::string>>> out;
    std::map<std::string, std::size_t> where;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != 2)
            throw InputError("row " + std::to_string(r + 1) + ": expected 2 fields, found " +
                             std::to_string(rows[r].size()));
        const auto [it, fresh] = where.try_emplace(rows[r][0], out.size());
        if (fresh) out.push_back({rows[r][0], {}});
        out[it->second].second.push_back(rows[r][1]);
    }
    return out;
}

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace gda
