// Command-line front end. Exit codes: 0 success, 2 input error or bad
// usage, 3 numerical degeneracy.

#include "gda/archive.hpp"
#include "gda/ca.hpp"
#include "gda/error.hpp"
#include "gda/hcluster.hpp"
#include "gda/io.hpp"
#include "gda/mca.hpp"
#include "gda/narrative.hpp"
#include "gda/svg.hpp"
#include "gda/textpipe.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace gda;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;

std::vector<std::string> split_list(const std::vector<std::string>& items) {
    std::vector<std::string> out;
    for (const auto& item : items) {
        std::size_t start = 0;
        while (start <= item.size()) {
            const std::size_t comma = std::min(item.find(',', start), item.size());
            if (comma > start) out.push_back(item.substr(start, comma - start));
            start = comma + 1;
        }
    }
    return out;
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-")
        std::cout << content;
    else
        write_file_atomic(path, content);
}

// ---- fit

struct FitArgs {
    std::string table, categorical, output, missing = "category", filter_log;
    bool lenient = false, benzecri = false;
    std::size_t rare = 0;
};

void run_fit(const FitArgs& a) {
    ModelArchive archive;
    if (!a.table.empty()) {
        archive.provenance.input_kind = "table";
        archive.provenance.sources = {a.table};
        FitOptions opts;
        opts.strict = !a.lenient;
        archive.model = fit_ca(load_table(a.table), opts);
        for (const auto& r : archive.model.dropped_rows) archive.provenance.notes.push_back("dropped empty row " + r);
        for (const auto& c : archive.model.dropped_cols) archive.provenance.notes.push_back("dropped empty column " + c);
    } else {
        archive.provenance.input_kind = "categorical";
        archive.provenance.sources = {a.categorical};
        McaOptions opts;
        if (a.missing == "drop")
            opts.missing = MissingPolicy::drop_individual;
        else if (a.missing != "category")
            throw InputError("--missing must be 'category' or 'drop'");
        opts.rare_threshold = a.rare;
        opts.benzecri = a.benzecri;
        McaResult res = fit_mca(load_categorical(a.categorical), opts);
        archive.model = std::move(res.model);
        archive.provenance.notes = std::move(res.notes);
        McaInfo info;
        info.questions = res.questions;
        for (const auto& q : res.prepared.questions)
            if (q.role == VariableRole::principal) info.question_labels.push_back(q.label);
        info.corrected_eigenvalues = std::move(res.corrected_eigenvalues);
        archive.mca = std::move(info);
        if (!res.supplementary.labels.empty()) archive.put(StoredProjection{"supplementary-questions", res.supplementary});
    }
    if (!a.filter_log.empty()) archive.provenance.filter_log_digest = fnv1a_hex(read_file(a.filter_log));
    save_archive(a.output, archive);
}

// ---- textpipe

struct TextpipeArgs {
    std::string input, output, segment_by = "file", marker = "SCENE", filter_log, stopword_dir = GDA_DATA_DIR "/stopwords";
    std::vector<std::string> stopwords, classes, scripts;
    std::size_t min_occurrences = 1000;
    unsigned threads = 1;
    bool presence = false, keep_empty = false, separate_preamble = false;
};

void run_textpipe(const TextpipeArgs& a) {
    FilterPolicy policy;
    policy.min_occurrences = a.min_occurrences;
    policy.keep_empty_segments = a.keep_empty;
    for (const auto& s : split_list(a.scripts)) policy.scripts.insert(script_from_string(s));
    for (const auto& s : split_list(a.stopwords)) {
        if (fs::is_regular_file(s))
            policy.stoplist.merge(Stoplist::load(s));
        else
            policy.stoplist.merge(load_stoplists(a.stopword_dir, {s}));
    }
    const auto classes = split_list(a.classes);
    policy.stopword_classes = classes.empty() ? policy.stoplist.classes()
                                              : std::set<std::string>(classes.begin(), classes.end());

    std::vector<RawSegment> raw;
    if (a.segment_by == "file")
        raw = segment_files(a.input);
    else if (a.segment_by == "marker")
        raw = segment_by_marker(read_file(a.input), a.marker, a.separate_preamble);
    else if (a.segment_by == "day")
        raw = segment_by_day(load_tweets(a.input), a.keep_empty);
    else
        throw InputError("--segment-by must be file, marker or day");
    if (raw.empty()) throw InputError("no text segments found in '" + a.input + "'");

    const SegmentedCorpus corpus = apply_filter(build_corpus(raw, policy, std::max(1u, a.threads)), policy);
    const Crosstab ct = crosstab(corpus, a.presence ? CrosstabMode::presence : CrosstabMode::frequency);
    if (!a.filter_log.empty()) write_file_atomic(a.filter_log, filter_log_to_csv(corpus.filter_log));
    write_file_atomic(a.output, table_to_csv(ct.table));
    std::cerr << corpus.segments.size() << " segments, " << corpus.retained.size() << " terms retained, "
              << corpus.filter_log.size() << " filter records\n";
}

// ---- project

struct ProjectArgs {
    std::string archive, rows, cols, output, store, proximity;
    double fraction = 0.1;
};

void run_project(const ProjectArgs& a) {
    ModelArchive archive = load_archive(a.archive);
    const FactorModel& m = archive.model;
    const bool by_rows = !a.rows.empty();
    const ContingencyTable t = load_table(by_rows ? a.rows : a.cols);
    const auto& host = by_rows ? m.col_labels : m.row_labels;
    const auto& given = by_rows ? t.col_labels() : t.row_labels();
    if (given.size() != host.size())
        throw InputError("supplementary table must cover exactly the model's " + std::string(by_rows ? "columns" : "rows"));

    SupplementaryProjection proj;
    if (by_rows) {
        Eigen::MatrixXd profiles(t.rows(), static_cast<Eigen::Index>(host.size()));
        for (std::size_t j = 0; j < host.size(); ++j) {
            const Eigen::Index src = find_label(given, host[j]);
            if (src < 0) throw InputError("supplementary table lacks column '" + host[j] + "'");
            profiles.col(static_cast<Eigen::Index>(j)) = t.counts().col(src);
        }
        proj = project_supplementary(m, t.row_labels(), profiles, PointKind::row);
    } else {
        Eigen::MatrixXd profiles(static_cast<Eigen::Index>(host.size()), t.cols());
        for (std::size_t i = 0; i < host.size(); ++i) {
            const Eigen::Index src = find_label(given, host[i]);
            if (src < 0) throw InputError("supplementary table lacks row '" + host[i] + "'");
            profiles.row(static_cast<Eigen::Index>(i)) = t.counts().row(src);
        }
        proj = project_supplementary(m, t.col_labels(), profiles, PointKind::column);
    }
    emit(a.output, coords_to_csv(proj.labels, proj.coords));
    if (!a.proximity.empty()) {
        std::string csv = csv_line({"label", "distance", "near_origin"});
        for (const auto& p : origin_proximity(m, proj, a.fraction))
            csv += csv_line({p.label, format_double(p.distance), p.near_origin ? "true" : "false"});
        write_file_atomic(a.proximity, csv);
    }
    if (!a.store.empty()) {
        archive.put(StoredProjection{a.store, std::move(proj)});
        save_archive(a.archive, archive);
    }
}

// ---- cluster

struct ClusterArgs {
    std::string archive, entities = "rows", name, output, svg, change_output;
    bool constrained = false;
    int dimensions = 0;
    std::size_t change_points = 0;
};

void run_cluster(const ClusterArgs& a) {
    ModelArchive archive = load_archive(a.archive);
    const PointKind kind = point_kind_from_string(a.entities);
    const PointCloud cloud = cloud_from_model(archive.model, kind, a.dimensions);
    StoredDendrogram sd;
    sd.entities = kind;
    sd.dimensions = a.dimensions;
    sd.dendrogram = a.constrained ? constrained_cluster(cloud) : ward_cluster(cloud);
    sd.name = a.name.empty() ? a.entities + (a.constrained ? "-constrained" : "") : a.name;

    if (a.change_points > 0) {
        std::string csv = csv_line({"rank", "position", "before", "after", "height", "raw_height"});
        std::size_t rank = 0;
        for (const auto& cp : change_points(sd.dendrogram, a.change_points))
            csv += csv_line({std::to_string(++rank), std::to_string(cp.position), cp.before, cp.after,
                             format_double(cp.height), format_double(cp.raw_height)});
        emit(a.change_output, csv);
    }
    if (!a.svg.empty()) write_file_atomic(a.svg, render_dendrogram(sd.dendrogram));
    archive.put(std::move(sd));
    save_archive(a.output.empty() ? a.archive : a.output, archive);
}

// ---- trajectory

struct TrajectoryArgs {
    std::string archive, output, archive_out;
    std::vector<std::string> track, segments, axes;
    std::size_t smoothing = 0;
};

void run_trajectory(const TrajectoryArgs& a) {
    ModelArchive archive = load_archive(a.archive);
    TrajectoryOptions opts;
    opts.smoothing = a.smoothing;
    for (const auto& s : split_list(a.axes)) opts.axes.push_back(static_cast<int>(parse_double(s)));
    const auto supp = archive.projections_of(PointKind::column);
    std::vector<Trajectory> out;
    for (const auto& term : split_list(a.track)) out.push_back(trajectory(archive.model, term, split_list(a.segments), opts, supp));
    if (out.empty()) throw InputError("--track needs at least one term");
    emit(a.output, trajectories_to_csv(out));
    for (auto& t : out) archive.put(std::move(t));
    save_archive(a.archive_out.empty() ? a.archive : a.archive_out, archive);
}

// ---- impact

struct ImpactArgs {
    std::string archive, groups, initiators, output, archive_out;
};

void run_impact(const ImpactArgs& a) {
    ModelArchive archive = load_archive(a.archive);
    const auto groups = parse_pairs_csv(read_file(a.groups), "group", "member");
    const auto inits = parse_pairs_csv(read_file(a.initiators), "group", "initiator");
    std::vector<ImpactGroup> spec;
    for (const auto& [id, members] : groups) {
        const auto it = std::find_if(inits.begin(), inits.end(), [&](const auto& p) { return p.first == id; });
        if (it == inits.end()) throw InputError("group '" + id + "' has no initiator");
        if (it->second.size() != 1) throw InputError("group '" + id + "' has more than one initiator");
        spec.push_back({id, members, it->second.front()});
    }
    for (const auto& [id, _] : inits)
        if (std::none_of(groups.begin(), groups.end(), [&](const auto& g) { return g.first == id; }))
            throw InputError("initiator given for unknown group '" + id + "'");
    archive.impacts = impact(archive.model, spec);
    emit(a.output, impacts_to_csv(archive.impacts));
    save_archive(a.archive_out.empty() ? a.archive : a.archive_out, archive);
}

// ---- plot

struct PlotArgs {
    std::string archive, output, plane = "1,2", row_labels, col_labels, title, dendrogram;
    std::optional<std::size_t> top;
    bool no_rows = false, no_cols = false, no_supplementary = false, no_impacts = false;
};

void run_plot(const PlotArgs& a) {
    const ModelArchive archive = load_archive(a.archive);
    if (!a.dendrogram.empty()) {
        const auto it = std::find_if(archive.dendrograms.begin(), archive.dendrograms.end(),
                                     [&](const StoredDendrogram& d) { return d.name == a.dendrogram; });
        if (it == archive.dendrograms.end()) throw InputError("archive has no dendrogram '" + a.dendrogram + "'");
        write_file_atomic(a.output, render_dendrogram(it->dendrogram));
        return;
    }
    PlotSpec spec;
    const auto axes = split_list({a.plane});
    if (axes.size() != 2) throw InputError("--plane expects two axes, e.g. 1,2");
    spec.axis_x = static_cast<int>(parse_double(axes[0]));
    spec.axis_y = static_cast<int>(parse_double(axes[1]));
    spec.show_rows = !a.no_rows;
    spec.show_cols = !a.no_cols;
    const LabelPolicy fallback = a.top ? LabelPolicy::top : LabelPolicy::all;
    spec.row_labels = a.row_labels.empty() ? fallback : label_policy_from_string(a.row_labels);
    spec.col_labels = a.col_labels.empty() ? fallback : label_policy_from_string(a.col_labels);
    spec.top_m = a.top.value_or(0);
    spec.title = a.title;
    if (!a.no_supplementary)
        for (const auto& p : archive.projections) spec.supplementary.push_back(p.projection);
    if (!a.no_impacts) spec.impacts = archive.impacts;
    write_file_atomic(a.output, render_factor_plane(archive.model, spec));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geometric data analysis: correspondence analysis, MCA, clustering and narrative measures"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit CA on a table or MCA on categorical data");
    auto* fit_table = fit_cmd->add_option("--table", fit.table, "Table CSV")->check(CLI::ExistingFile);
    auto* fit_cat = fit_cmd->add_option("--categorical", fit.categorical, "Categorical CSV")->check(CLI::ExistingFile);
    fit_table->excludes(fit_cat);
    fit_cmd->add_option("-o,--output", fit.output, "Archive to write")->required();
    fit_cmd->add_flag("--lenient", fit.lenient, "Drop empty rows/columns instead of failing");
    fit_cmd->add_option("--missing", fit.missing, "Missing answers: category or drop")->check(CLI::IsMember({"category", "drop"}));
    fit_cmd->add_option("--rare", fit.rare, "Fuse categories seen fewer than N times");
    fit_cmd->add_flag("--benzecri", fit.benzecri, "Report corrected MCA eigenvalues");
    fit_cmd->add_option("--filter-log", fit.filter_log, "Filter log written by textpipe")->check(CLI::ExistingFile);

    TextpipeArgs tp;
    auto* tp_cmd = app.add_subcommand("textpipe", "Turn a corpus into a segments x terms table CSV");
    tp_cmd->add_option("-i,--input", tp.input, "Directory, text file or tweet CSV")->required();
    tp_cmd->add_option("-o,--output", tp.output, "Table CSV to write")->required();
    tp_cmd->add_option("--segment-by", tp.segment_by, "file, marker or day")->check(CLI::IsMember({"file", "marker", "day"}));
    tp_cmd->add_option("--marker", tp.marker, "Line prefix starting a segment");
    tp_cmd->add_flag("--separate-preamble", tp.separate_preamble, "Text before the first marker is its own segment");
    tp_cmd->add_option("--min-occurrences", tp.min_occurrences, "Minimum corpus frequency of a term")->capture_default_str();
    tp_cmd->add_option("--stopwords", tp.stopwords, "Stoplist languages or files, comma separated");
    tp_cmd->add_option("--stopword-dir", tp.stopword_dir, "Directory of <lang>.txt stoplists")->capture_default_str();
    tp_cmd->add_option("--stopword-classes", tp.classes, "Classes to drop (default: all loaded)");
    tp_cmd->add_option("--scripts", tp.scripts, "Allowed scripts, e.g. latin");
    tp_cmd->add_flag("--presence", tp.presence, "Presence/absence instead of frequencies");
    tp_cmd->add_flag("--keep-empty", tp.keep_empty, "Keep segments (or days) without retained terms");
    tp_cmd->add_option("--threads", tp.threads, "Tokenizer threads")->check(CLI::Range(1u, 256u));
    tp_cmd->add_option("--filter-log", tp.filter_log, "Write the filter log CSV here");

    ProjectArgs pr;
    auto* pr_cmd = app.add_subcommand("project", "Project supplementary rows or columns");
    pr_cmd->add_option("archive", pr.archive, "Model archive")->required()->check(CLI::ExistingFile);
    auto* pr_rows = pr_cmd->add_option("--rows", pr.rows, "Table CSV of supplementary rows")->check(CLI::ExistingFile);
    auto* pr_cols = pr_cmd->add_option("--cols", pr.cols, "Table CSV of supplementary columns")->check(CLI::ExistingFile);
    pr_rows->excludes(pr_cols);
    pr_cmd->add_option("-o,--output", pr.output, "Coordinates CSV (default stdout)");
    pr_cmd->add_option("--store", pr.store, "Also store the projection in the archive under this name");
    pr_cmd->add_option("--proximity", pr.proximity, "Write distance-to-origin CSV here");
    pr_cmd->add_option("--origin-fraction", pr.fraction, "Near-origin threshold as a fraction of the RMS point norm");

    ClusterArgs cl;
    auto* cl_cmd = app.add_subcommand("cluster", "Ward hierarchical clustering in factor space");
    cl_cmd->add_option("archive", cl.archive, "Model archive")->required()->check(CLI::ExistingFile);
    cl_cmd->add_option("--entities", cl.entities, "rows or cols")->check(CLI::IsMember({"rows", "cols"}));
    cl_cmd->add_flag("--constrained", cl.constrained, "Merge only neighbours in table order");
    cl_cmd->add_option("--dimensions", cl.dimensions, "Leading factors to use (0 = all)");
    cl_cmd->add_option("--name", cl.name, "Name of the stored dendrogram");
    cl_cmd->add_option("--change-points", cl.change_points, "Report the top m boundaries (constrained only)");
    cl_cmd->add_option("--change-output", cl.change_output, "Change-point CSV (default stdout)");
    cl_cmd->add_option("--svg", cl.svg, "Also render the dendrogram");
    cl_cmd->add_option("-o,--output", cl.output, "Archive to write (default: update in place)");

    TrajectoryArgs tr;
    auto* tr_cmd = app.add_subcommand("trajectory", "Distances from tracked terms to each segment");
    tr_cmd->add_option("archive", tr.archive, "Model archive")->required()->check(CLI::ExistingFile);
    tr_cmd->add_option("--track", tr.track, "Terms, comma separated")->required();
    tr_cmd->add_option("--segments", tr.segments, "Segments, comma separated (default: all rows)");
    tr_cmd->add_option("--axes", tr.axes, "Factor subset, comma separated (default: all)");
    tr_cmd->add_option("--smoothing", tr.smoothing, "Moving-average window (default off)");
    tr_cmd->add_option("-o,--output", tr.output, "Trajectory CSV (default stdout)");
    tr_cmd->add_option("--archive-out", tr.archive_out, "Archive to write (default: update in place)");

    ImpactArgs im;
    auto* im_cmd = app.add_subcommand("impact", "Initiator to group-centroid distances");
    im_cmd->add_option("archive", im.archive, "Model archive")->required()->check(CLI::ExistingFile);
    im_cmd->add_option("--groups", im.groups, "CSV group,member")->required()->check(CLI::ExistingFile);
    im_cmd->add_option("--initiators", im.initiators, "CSV group,initiator")->required()->check(CLI::ExistingFile);
    im_cmd->add_option("-o,--output", im.output, "Impact CSV (default stdout)");
    im_cmd->add_option("--archive-out", im.archive_out, "Archive to write (default: update in place)");

    PlotArgs pl;
    auto* pl_cmd = app.add_subcommand("plot", "Render a factor plane or a stored dendrogram as SVG");
    pl_cmd->add_option("archive", pl.archive, "Model archive")->required()->check(CLI::ExistingFile);
    pl_cmd->add_option("-o,--output", pl.output, "SVG to write")->required();
    pl_cmd->add_option("--plane", pl.plane, "Axis pair i,j")->capture_default_str();
    pl_cmd->add_option("--top-contributors", pl.top, "Label only the m largest plane contributors");
    pl_cmd->add_option("--row-labels", pl.row_labels, "all, top or none")->check(CLI::IsMember({"all", "top", "none"}));
    pl_cmd->add_option("--col-labels", pl.col_labels, "all, top or none")->check(CLI::IsMember({"all", "top", "none"}));
    pl_cmd->add_flag("--no-rows", pl.no_rows, "Hide row points");
    pl_cmd->add_flag("--no-cols", pl.no_cols, "Hide column points");
    pl_cmd->add_flag("--no-supplementary", pl.no_supplementary, "Hide stored supplementary points");
    pl_cmd->add_flag("--no-impacts", pl.no_impacts, "Hide stored impact arrows");
    pl_cmd->add_option("--title", pl.title, "Plot title");
    pl_cmd->add_option("--dendrogram", pl.dendrogram, "Render this stored dendrogram instead");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n";
        const auto subs = app.get_subcommands();
        std::cerr << (subs.empty() ? app.help() : subs.front()->help());
        return kExitInput;
    }

    try {
        if (*fit_cmd) {
            if (fit.table.empty() == fit.categorical.empty()) throw InputError("fit needs --table or --categorical");
            run_fit(fit);
        } else if (*tp_cmd) {
            run_textpipe(tp);
        } else if (*pr_cmd) {
            if (pr.rows.empty() == pr.cols.empty()) throw InputError("project needs --rows or --cols");
            run_project(pr);
        } else if (*cl_cmd) {
            run_cluster(cl);
        } else if (*tr_cmd) {
            run_trajectory(tr);
        } else if (*im_cmd) {
            run_impact(im);
        } else if (*pl_cmd) {
            run_plot(pl);
        }
    } catch (const DegenerateError& e) {
        std::cerr << "degenerate: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return 0;
}
