#pragma once

#include "gda/ca.hpp"
#include "gda/mca.hpp"
#include "gda/narrative.hpp"
#include "gda/table.hpp"
#include "gda/textpipe.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace gda {

using CsvRow = std::vector<std::string>;

/// RFC 4180 records: quoted fields, doubled quotes, CRLF or LF line ends.
/// A leading UTF-8 byte-order mark is skipped. Blank lines are ignored.
std::vector<CsvRow> parse_csv(std::string_view text);

/// Field quoted only when it contains a comma, quote or line break.
std::string csv_field(std::string_view s);
std::string csv_line(const CsvRow& fields);

/// 17 significant digits, locale independent.
std::string format_double(double x);
double parse_double(std::string_view s);

std::string read_file(const std::filesystem::path& path);
/// Write to a sibling temporary file, then rename over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

ContingencyTable parse_table_csv(std::string_view text);
ContingencyTable load_table(const std::filesystem::path& path);
std::string table_to_csv(const ContingencyTable& table);

/// First column is the individual id; categories of each question are the
/// distinct non-empty answers in byte order. An optional second row of
/// `principal`/`supplementary` sets the roles.
CategoricalDataset parse_categorical_csv(std::string_view text);
CategoricalDataset load_categorical(const std::filesystem::path& path);

/// Header `timestamp,text`.
std::vector<TimedRecord> parse_tweet_csv(std::string_view text);
std::vector<TimedRecord> load_tweets(const std::filesystem::path& path);

/// `label,dim1,...,dimK`.
std::string coords_to_csv(const std::vector<std::string>& labels, const Eigen::MatrixXd& coords);
/// `term,segment,distance`.
std::string trajectories_to_csv(const std::vector<Trajectory>& trajectories);
/// `group,initiator,distance,inertia,initiator_in_group,dim1,...`.
std::string impacts_to_csv(const std::vector<ImpactRecord>& impacts);
std::string filter_log_to_csv(const std::vector<FilterRecord>& log);

/// Pairs `key,value` (header required), grouped by key in first-seen order.
std::vector<std::pair<std::string, std::vector<std::string>>> parse_pairs_csv(std::string_view text,
                                                                              std::string_view key_header,
                                                                              std::string_view value_header);

/// 64-bit FNV-1a, lowercase hex.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace gda
