#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wilt/analysis.hpp"
#include "wilt/distill.hpp"
#include "wilt/error.hpp"
#include "wilt/metrics.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct DatasetArgs {
    std::string path;
    std::string format = "tud";
};

struct PresetArg {
    std::string text; // uniform:<v>, wwl, or wloa
};

wilt::Dataset load_dataset(const DatasetArgs& args) {
    if (args.format == "tud") {
        fs::path dir(args.path);
        if (!fs::is_directory(dir)) throw wilt::Error("dataset directory not found: " + args.path);
        return wilt::load_tudataset(dir, dir.filename().string());
    }
    if (args.format == "jsonl") {
        if (!fs::exists(args.path)) throw wilt::Error("dataset file not found: " + args.path);
        return wilt::load_json_graphs(args.path);
    }
    throw wilt::Error("unknown dataset format '" + args.format + "' (expected tud or jsonl)");
}

void add_dataset_flags(CLI::App* cmd, DatasetArgs& args) {
    cmd->add_option("--dataset", args.path,
                    "Dataset path: a TUDataset directory or a JSON-lines file")
        ->required();
    cmd->add_option("--format", args.format, "Dataset format: tud or jsonl (default tud)");
}

// Builds the tree for the requested flavor; returns the dataset actually
// refined (padded for the dummy flavor) together with tree and assignment.
struct BuiltWilt {
    wilt::Dataset dataset;
    wilt::Wilt tree;
    wilt::ColorAssignment assignment;
};

BuiltWilt build_for_flavor(wilt::Dataset dataset, int iterations, wilt::Flavor flavor) {
    BuiltWilt out{std::move(dataset), {}, {}};
    if (flavor == wilt::Flavor::dummy) out.dataset = wilt::add_dummy_nodes(out.dataset);
    auto [tree, assignment] = wilt::build_wilt(out.dataset, iterations);
    out.tree = std::move(tree);
    out.assignment = std::move(assignment);
    return out;
}

void apply_weights(wilt::Wilt& tree, const PresetArg& preset, const std::string& wilt_file,
                   wilt::Flavor flavor) {
    if (!wilt_file.empty()) {
        wilt::Wilt loaded = wilt::load_wilt(wilt_file);
        if (loaded.num_colors() != tree.num_colors() || loaded.parent != tree.parent)
            throw wilt::Error(wilt_file + " was not built from this dataset (tree mismatch)");
        tree.weight = loaded.weight;
        return;
    }
    if (preset.text.empty()) return; // keep the build weights (all ones)
    if (preset.text == "wwl") {
        if (flavor != wilt::Flavor::size)
            throw wilt::Error("the wwl preset requires --flavor size");
        tree = wilt::set_uniform_weights(std::move(tree), wilt::wwl_preset_weight(tree.iterations));
        return;
    }
    if (preset.text == "wloa") {
        if (flavor != wilt::Flavor::dummy)
            throw wilt::Error("the wloa preset requires --flavor dummy");
        tree = wilt::set_uniform_weights(std::move(tree), wilt::kWloaPresetWeight);
        return;
    }
    if (preset.text.rfind("uniform:", 0) == 0) {
        double value = 0.0;
        try {
            value = std::stod(preset.text.substr(8));
        } catch (const std::exception&) {
            throw wilt::Error("bad preset '" + preset.text + "'");
        }
        tree = wilt::set_uniform_weights(std::move(tree), value);
        return;
    }
    throw wilt::Error("unknown preset '" + preset.text + "' (expected uniform:<v>, wwl, or wloa)");
}

wilt::TargetDistance load_target(const std::string& spec, int expected_size) {
    wilt::TargetDistance target = [&] {
        if (spec.rfind("matrix:", 0) == 0)
            return wilt::TargetDistance::load_matrix_csv(spec.substr(7));
        if (spec.rfind("vectors:", 0) == 0)
            return wilt::TargetDistance::load_vectors_csv(spec.substr(8));
        throw wilt::Error("bad target '" + spec + "' (expected matrix:<path> or vectors:<path>)");
    }();
    if (target.size() != expected_size)
        throw wilt::Error("target covers " + std::to_string(target.size()) + " graphs but the dataset has " +
                          std::to_string(expected_size));
    return target;
}

fs::path prepare_out_dir(const std::string& out) {
    fs::path dir(out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw wilt::Error("cannot create output directory " + out);
    return dir;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw wilt::Error("cannot write " + path.string());
    out << text;
    if (!out) throw wilt::Error("write failed for " + path.string());
}

std::string summary_line(const wilt::Wilt& tree) {
    std::vector<int> per_level(tree.iterations + 1, 0);
    for (wilt::ColorId c = 0; c < tree.num_colors(); ++c) ++per_level[tree.level[c]];
    std::string line = std::to_string(tree.num_colors()) + " colors, " +
                       std::to_string(tree.num_edges()) + " edges; per level:";
    for (int count : per_level) line += " " + std::to_string(count);
    return line;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weisfeiler Leman Labeling Tree toolkit: build trees, compute tree "
                 "optimal-transport graph distances, distill target metrics into edge "
                 "weights, and report influential colors"};
    app.require_subcommand(1);
    app.footer(
        "File formats:\n"
        "  TUDataset directory: <name>_A.txt (1-indexed 'u, v' rows, both directions of\n"
        "    every undirected edge), <name>_graph_indicator.txt, optional\n"
        "    <name>_node_labels.txt / <name>_edge_labels.txt, and\n"
        "    <name>_graph_labels.txt (classification) or <name>_graph_attributes.txt\n"
        "    (regression).\n"
        "  JSON-lines dataset: one record per line with num_nodes, edges=[[u,v],...],\n"
        "    node_labels, optional edge_labels, optional numeric target.\n"
        "  Distance matrix CSV: first line n, then n rows of n comma-separated reals.\n"
        "  Embedding vectors CSV: one row of reals per graph, equal lengths; distances\n"
        "    are Euclidean.\n"
        "  .wilt.json: versioned tree dump {version, L, num_colors, parent[], level[],\n"
        "    weight[], dummy_chain[], provenance}.\n"
        "Exit codes: 0 success, 2 usage or validation error, 3 numeric failure.");

    // ---- build ----
    auto* build = app.add_subcommand("build", "Build a WILT and export embeddings");
    DatasetArgs build_data;
    int build_iterations = 2;
    std::string build_flavor = "raw";
    std::string build_out = ".";
    add_dataset_flags(build, build_data);
    build->add_option("-L,--iterations", build_iterations, "WL iterations (default 2)");
    build->add_option("--flavor", build_flavor, "Embedding flavor: raw, size, or dummy");
    build->add_option("--out", build_out, "Output directory");

    // ---- dist ----
    auto* dist = app.add_subcommand("dist", "Write the pairwise distance matrix");
    DatasetArgs dist_data;
    int dist_iterations = 2;
    std::string dist_flavor = "size";
    PresetArg dist_preset;
    std::string dist_wilt_file;
    std::string dist_out = ".";
    add_dataset_flags(dist, dist_data);
    dist->add_option("-L,--iterations", dist_iterations, "WL iterations (default 2)");
    dist->add_option("--flavor", dist_flavor, "Embedding flavor: raw, size, or dummy");
    dist->add_option("--preset", dist_preset.text, "Edge weights: uniform:<v>, wwl, or wloa");
    dist->add_option("--wilt", dist_wilt_file, "Fitted .wilt.json supplying the edge weights");
    dist->add_option("--out", dist_out, "Output directory");

    // ---- fit ----
    auto* fit_cmd = app.add_subcommand("fit", "Distill a target distance into edge weights");
    DatasetArgs fit_data;
    int fit_iterations = 2;
    std::string fit_flavor = "size";
    std::string fit_target;
    wilt::FitConfig fit_config;
    long long fit_pairs = 0;
    std::string fit_out = ".";
    add_dataset_flags(fit_cmd, fit_data);
    fit_cmd->add_option("-L,--iterations", fit_iterations, "WL iterations (default 2)");
    fit_cmd->add_option("--flavor", fit_flavor, "Embedding flavor: size or dummy");
    fit_cmd->add_option("--target", fit_target, "Target distances: matrix:<path> or vectors:<path>")
        ->required();
    fit_cmd->add_option("--epochs", fit_config.epochs, "Training epochs (default 10)");
    fit_cmd->add_option("--lr", fit_config.learning_rate, "Learning rate (default 1e-2)");
    fit_cmd->add_option("--batch", fit_config.batch_size, "Batch size (default 256)");
    fit_cmd->add_option("--l1", fit_config.l1_lambda, "L1 regularization strength (default 0)");
    fit_cmd->add_option("--pairs", fit_pairs,
                        "Sample this many training pairs per epoch instead of all pairs");
    fit_cmd->add_option("--seed", fit_config.seed, "Random seed (default 0)");
    fit_cmd->add_option("--out", fit_out, "Output directory");

    // ---- report ----
    auto* report_cmd = app.add_subcommand("report", "Write the analysis bundle for a fitted tree");
    DatasetArgs report_data;
    int report_iterations = 2;
    std::string report_flavor = "size";
    std::string report_wilt_file;
    std::string report_target;
    int report_top = 10;
    int report_bins = 50;
    int report_k = 0;
    long long report_pairs = 1000;
    std::uint64_t report_seed = 0;
    std::string report_out = ".";
    double report_min_frequency = 0.01;
    add_dataset_flags(report_cmd, report_data);
    report_cmd->add_option("-L,--iterations", report_iterations, "WL iterations (default 2)");
    report_cmd->add_option("--flavor", report_flavor, "Embedding flavor: raw, size, or dummy");
    report_cmd->add_option("--wilt", report_wilt_file, "Fitted .wilt.json")->required();
    report_cmd->add_option("--target", report_target,
                           "Target distances for the alignment block (matrix: or vectors:)");
    report_cmd->add_option("--top", report_top, "Number of top-weight colors (default 10)");
    report_cmd->add_option("--bins", report_bins, "Weight histogram bins (default 50)");
    report_cmd->add_option("--min-frequency", report_min_frequency,
                           "Minimum fraction of graphs containing a reported color (default 0.01)");
    report_cmd->add_option("-k,--k", report_k, "Also report ALI_k at this k");
    report_cmd->add_option("--pairs", report_pairs, "RMSE pair sample size (default 1000)");
    report_cmd->add_option("--seed", report_seed, "Random seed (default 0)");
    report_cmd->add_option("--out", report_out, "Output directory");

    // ---- align ----
    auto* align_cmd = app.add_subcommand("align", "Print ALI_k / RMSE alignment scores");
    DatasetArgs align_data;
    std::string align_target;
    std::string align_against;
    int align_k = 0;
    long long align_pairs = 1000;
    std::uint64_t align_seed = 0;
    add_dataset_flags(align_cmd, align_data);
    align_cmd->add_option("--target", align_target, "Target distances: matrix:<path> or vectors:<path>")
        ->required();
    align_cmd->add_option("-k,--k", align_k, "Compute ALI_k against the dataset labels at this k");
    align_cmd->add_option("--against", align_against,
                          "Second metric (matrix: or vectors:) for the RMSE alignment");
    align_cmd->add_option("--pairs", align_pairs, "RMSE pair sample size (default 1000)");
    align_cmd->add_option("--seed", align_seed, "Random seed (default 0)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (build->parsed()) {
            const wilt::Flavor flavor = wilt::flavor_from_name(build_flavor);
            auto built = build_for_flavor(load_dataset(build_data), build_iterations, flavor);
            const auto embeddings =
                wilt::embed_dataset(built.dataset, built.assignment, built.tree, flavor);
            const fs::path out_dir = prepare_out_dir(build_out);
            wilt::save_wilt(built.tree, out_dir / (built.dataset.name + ".wilt.json"));
            wilt::export_embeddings_csv(embeddings, out_dir / "embeddings.csv");
            std::cout << summary_line(built.tree) << "\n";
        } else if (dist->parsed()) {
            const wilt::Flavor flavor = wilt::flavor_from_name(dist_flavor);
            if (!dist_preset.text.empty() && !dist_wilt_file.empty())
                throw wilt::Error("--preset and --wilt are mutually exclusive");
            auto built = build_for_flavor(load_dataset(dist_data), dist_iterations, flavor);
            apply_weights(built.tree, dist_preset, dist_wilt_file, flavor);
            const auto embeddings =
                wilt::embed_dataset(built.dataset, built.assignment, built.tree, flavor);
            const auto matrix = wilt::pairwise_matrix(embeddings, built.tree);
            const fs::path out_dir = prepare_out_dir(dist_out);
            matrix.save_matrix_csv(out_dir / "distances.csv");
            std::cout << "wrote " << (out_dir / "distances.csv").string() << " (" << matrix.size()
                      << "x" << matrix.size() << ")\n";
        } else if (fit_cmd->parsed()) {
            fit_config.flavor = wilt::flavor_from_name(fit_flavor);
            if (fit_pairs > 0) {
                fit_config.sampling = wilt::PairSampling::random;
                fit_config.sample_count = fit_pairs;
            }
            auto built = build_for_flavor(load_dataset(fit_data), fit_iterations, fit_config.flavor);
            const auto embeddings =
                wilt::embed_dataset(built.dataset, built.assignment, built.tree, fit_config.flavor);
            const auto target = load_target(fit_target, static_cast<int>(embeddings.size()));
            auto [fitted, report] = wilt::fit(built.tree, embeddings, target, fit_config,
                                              [](int epoch, double loss_value, int nonzero) {
                                                  std::cout << "epoch " << epoch << " loss "
                                                            << loss_value << " nnz " << nonzero
                                                            << "\n";
                                              });
            const fs::path out_dir = prepare_out_dir(fit_out);
            wilt::save_wilt(fitted, out_dir / "fitted.wilt.json");
            nlohmann::ordered_json j;
            j["config"] = {{"epochs", fit_config.epochs},
                           {"lr", fit_config.learning_rate},
                           {"batch", fit_config.batch_size},
                           {"l1", fit_config.l1_lambda},
                           {"pairs", fit_config.sample_count},
                           {"flavor", wilt::flavor_name(fit_config.flavor)},
                           {"seed", fit_config.seed}};
            j["loss"] = report.epoch_loss;
            j["nonzero"] = report.epoch_nonzero;
            j["initial_loss"] = report.initial_loss;
            j["final_loss"] = report.final_loss;
            write_text(out_dir / "fit_report.json", j.dump(2) + "\n");
        } else if (report_cmd->parsed()) {
            const wilt::Flavor flavor = wilt::flavor_from_name(report_flavor);
            auto built = build_for_flavor(load_dataset(report_data), report_iterations, flavor);
            apply_weights(built.tree, PresetArg{}, report_wilt_file, flavor);
            const auto embeddings =
                wilt::embed_dataset(built.dataset, built.assignment, built.tree, flavor);
            const fs::path out_dir = prepare_out_dir(report_out);

            wilt::save_histogram_csv(wilt::weight_histogram(built.tree, report_bins),
                                     out_dir / "weights_histogram.csv");

            const auto entries = wilt::top_colors(built.tree, built.dataset, built.assignment,
                                                  report_top, report_min_frequency);
            nlohmann::ordered_json top_json = nlohmann::ordered_json::array();
            for (std::size_t rank = 0; rank < entries.size(); ++rank) {
                const auto& e = entries[rank];
                top_json.push_back({{"rank", rank + 1},
                                    {"color", e.color},
                                    {"weight", e.weight},
                                    {"level", e.level},
                                    {"frequency", e.frequency},
                                    {"graph", e.graph_index},
                                    {"root", e.root_node}});
                write_text(out_dir / ("occurrence_" + std::to_string(rank + 1) + ".dot"),
                           wilt::export_occurrence(e, built.dataset));
            }
            write_text(out_dir / "top_colors.json", top_json.dump(2) + "\n");

            nlohmann::ordered_json align_json;
            align_json["seed"] = report_seed;
            if (!report_target.empty()) {
                const auto target = load_target(report_target, static_cast<int>(embeddings.size()));
                const auto sample = wilt::sample_pairs(static_cast<int>(embeddings.size()),
                                                       report_pairs, report_seed);
                std::vector<double> target_values, wilt_values;
                target_values.reserve(sample.size());
                wilt_values.reserve(sample.size());
                for (auto [i, j] : sample) {
                    target_values.push_back(target.at(i, j));
                    wilt_values.push_back(wilt::d_wilt(embeddings[i], embeddings[j], built.tree));
                }
                const auto alignment = wilt::rmse_align(target_values, wilt_values);
                align_json["pairs"] = sample.size();
                align_json["rmse"] = alignment.rmse;
                align_json["alpha"] = alignment.alpha;
                if (report_k > 0 && built.dataset.has_targets)
                    align_json["ali"] = {{"k", report_k},
                                         {"value", wilt::ali_k(target, built.dataset, report_k)}};
            } else {
                align_json["note"] = "no target provided";
            }
            write_text(out_dir / "alignment.json", align_json.dump(2) + "\n");
            std::cout << "wrote report bundle to " << out_dir.string() << "\n";
        } else if (align_cmd->parsed()) {
            const auto dataset = load_dataset(align_data);
            const auto target = load_target(align_target, static_cast<int>(dataset.graphs.size()));
            nlohmann::ordered_json j;
            j["seed"] = align_seed;
            if (align_k > 0)
                j["ali"] = {{"k", align_k}, {"value", wilt::ali_k(target, dataset, align_k)}};
            if (!align_against.empty()) {
                const auto against =
                    load_target(align_against, static_cast<int>(dataset.graphs.size()));
                const auto sample = wilt::sample_pairs(static_cast<int>(dataset.graphs.size()),
                                                       align_pairs, align_seed);
                std::vector<double> a, b;
                a.reserve(sample.size());
                b.reserve(sample.size());
                for (auto [i, jdx] : sample) {
                    a.push_back(target.at(i, jdx));
                    b.push_back(against.at(i, jdx));
                }
                const auto alignment = wilt::rmse_align(a, b);
                j["rmse"] = {{"value", alignment.rmse},
                             {"alpha", alignment.alpha},
                             {"pairs", sample.size()}};
            }
            if (align_k <= 0 && align_against.empty())
                throw wilt::Error("align needs -k and/or --against");
            std::cout << j.dump(2) << "\n";
        }
    } catch (const wilt::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const wilt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return 0;
}
