#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "wilt/analysis.hpp"
#include "wilt/distill.hpp"
#include "wilt/error.hpp"
#include "wilt/metrics.hpp"

namespace py = pybind11;
using namespace wilt;

namespace {

TargetDistance matrix_from_rows(const std::vector<std::vector<double>>& rows) {
    const int n = static_cast<int>(rows.size());
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != n) throw Error("distance matrix must be square");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return TargetDistance::from_matrix(n, std::move(flat));
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Weisfeiler Leman Labeling Trees: tree optimal-transport graph distances, "
              "metric distillation, and color-level reports";

    py::register_exception<Error>(m, "Error", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    py::enum_<Task>(m, "Task")
        .value("classification", Task::classification)
        .value("regression", Task::regression);

    py::enum_<Flavor>(m, "Flavor")
        .value("raw", Flavor::raw)
        .value("size", Flavor::size)
        .value("dummy", Flavor::dummy);

    py::enum_<PairSampling>(m, "PairSampling")
        .value("all_pairs", PairSampling::all_pairs)
        .value("random", PairSampling::random);

    py::class_<Graph>(m, "Graph")
        .def(py::init<>())
        .def_readwrite("num_nodes", &Graph::num_nodes)
        .def_readwrite("edges", &Graph::edges)
        .def_readwrite("node_labels", &Graph::node_labels)
        .def_readwrite("edge_labels", &Graph::edge_labels)
        .def_readwrite("target", &Graph::target)
        .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; });

    py::class_<Dataset>(m, "Dataset")
        .def(py::init<>())
        .def_readwrite("name", &Dataset::name)
        .def_readwrite("task", &Dataset::task)
        .def_readwrite("has_targets", &Dataset::has_targets)
        .def_readwrite("graphs", &Dataset::graphs)
        .def_readonly("dummy_label", &Dataset::dummy_label)
        .def_readonly("original_sizes", &Dataset::original_sizes)
        .def("max_graph_size", &Dataset::max_graph_size)
        .def("same_content", &Dataset::same_content)
        .def("__len__", [](const Dataset& d) { return d.graphs.size(); });

    m.def("validate_dataset", &validate_dataset);
    m.def("load_tudataset", &load_tudataset, py::arg("directory"), py::arg("name"));
    m.def("load_json_graphs", &load_json_graphs, py::arg("path"));
    m.def("save_json_graphs", &save_json_graphs, py::arg("dataset"), py::arg("path"));
    m.def("add_dummy_nodes", &add_dummy_nodes, py::arg("dataset"));

    py::class_<ColorAssignment>(m, "ColorAssignment")
        .def_readonly("iterations", &ColorAssignment::iterations)
        .def("num_graphs", &ColorAssignment::num_graphs)
        .def("num_nodes", &ColorAssignment::num_nodes, py::arg("graph_index"))
        .def("at", &ColorAssignment::at, py::arg("graph_index"), py::arg("node"), py::arg("level"));

    py::class_<ColorTable>(m, "ColorTable")
        .def_readonly("iterations", &ColorTable::iterations)
        .def("num_colors", &ColorTable::num_colors)
        .def("level_of", &ColorTable::level_of, py::arg("color"));

    m.def("refine", &refine, py::arg("dataset"), py::arg("iterations"));
    m.def("final_color_multiset", &final_color_multiset, py::arg("assignment"),
          py::arg("graph_index"));
    m.def("table_to_json", &table_to_json);
    m.def("assignment_to_json", &assignment_to_json);

    py::class_<Wilt>(m, "Wilt")
        .def_readonly("iterations", &Wilt::iterations)
        .def_readonly("parent", &Wilt::parent)
        .def_readonly("level", &Wilt::level)
        .def_readwrite("weight", &Wilt::weight)
        .def_readonly("dummy_chain", &Wilt::dummy_chain)
        .def_readonly("provenance", &Wilt::provenance)
        .def("num_colors", &Wilt::num_colors)
        .def("num_edges", &Wilt::num_edges)
        .def("has_dummy_chain", &Wilt::has_dummy_chain);

    m.def("build_wilt", &build_wilt, py::arg("dataset"), py::arg("iterations"));
    m.def("build_wilt_dummy", &build_wilt_dummy, py::arg("dataset"), py::arg("iterations"));
    m.def("path_distance", &path_distance, py::arg("tree"), py::arg("a"), py::arg("b"));
    m.def("set_uniform_weights", &set_uniform_weights, py::arg("tree"), py::arg("value"));
    m.def("wwl_preset_weight", &wwl_preset_weight, py::arg("iterations"));
    m.attr("WLOA_PRESET_WEIGHT") = kWloaPresetWeight;
    m.def("save_wilt", &save_wilt, py::arg("tree"), py::arg("path"));
    m.def("load_wilt", &load_wilt, py::arg("path"));

    py::class_<WiltEmbedding>(m, "WiltEmbedding")
        .def_readonly("flavor", &WiltEmbedding::flavor)
        .def_readonly("graph_size", &WiltEmbedding::graph_size)
        .def_readonly("entries", &WiltEmbedding::entries);

    m.def("embed", &embed, py::arg("dataset"), py::arg("graph_index"), py::arg("assignment"),
          py::arg("tree"), py::arg("flavor"));
    m.def("embed_dataset", &embed_dataset, py::arg("dataset"), py::arg("assignment"),
          py::arg("tree"), py::arg("flavor"));
    m.def("export_embeddings_csv", &export_embeddings_csv, py::arg("embeddings"), py::arg("path"));

    py::class_<TargetDistance>(m, "TargetDistance")
        .def_static("from_matrix", &matrix_from_rows, py::arg("rows"))
        .def_static("from_vectors", &TargetDistance::from_vectors, py::arg("rows"))
        .def_static("load_matrix_csv", &TargetDistance::load_matrix_csv, py::arg("path"))
        .def_static("load_vectors_csv", &TargetDistance::load_vectors_csv, py::arg("path"))
        .def("save_matrix_csv", &TargetDistance::save_matrix_csv, py::arg("path"))
        .def("at", &TargetDistance::at, py::arg("i"), py::arg("j"))
        .def("__len__", &TargetDistance::size);

    m.def(
        "d_wilt",
        [](const WiltEmbedding& a, const WiltEmbedding& b, const Wilt& tree) {
            return d_wilt(a, b, tree);
        },
        py::arg("a"), py::arg("b"), py::arg("tree"));
    m.def("d_wwl", &d_wwl, py::arg("a"), py::arg("b"), py::arg("tree"));
    m.def("d_wloa", &d_wloa, py::arg("a"), py::arg("b"), py::arg("tree"));
    m.def("d_wl", &d_wl, py::arg("multiset_a"), py::arg("multiset_b"));
    m.def("d_func", &d_func, py::arg("target_a"), py::arg("target_b"), py::arg("task"),
          py::arg("lo") = 0.0, py::arg("hi") = 0.0);
    m.def("target_range", &target_range, py::arg("dataset"));
    m.def("ot_oracle", &ot_oracle, py::arg("dataset"), py::arg("graph_a"), py::arg("graph_b"),
          py::arg("assignment"), py::arg("tree"), py::arg("flavor"));
    m.def("pairwise_matrix", &pairwise_matrix, py::arg("embeddings"), py::arg("tree"));

    py::class_<FitConfig>(m, "FitConfig")
        .def(py::init<>())
        .def_readwrite("epochs", &FitConfig::epochs)
        .def_readwrite("learning_rate", &FitConfig::learning_rate)
        .def_readwrite("batch_size", &FitConfig::batch_size)
        .def_readwrite("l1_lambda", &FitConfig::l1_lambda)
        .def_readwrite("sampling", &FitConfig::sampling)
        .def_readwrite("sample_count", &FitConfig::sample_count)
        .def_readwrite("flavor", &FitConfig::flavor)
        .def_readwrite("seed", &FitConfig::seed);

    py::class_<FitReport>(m, "FitReport")
        .def_readonly("weights", &FitReport::weights)
        .def_readonly("epoch_loss", &FitReport::epoch_loss)
        .def_readonly("epoch_nonzero", &FitReport::epoch_nonzero)
        .def_readonly("epoch_seconds", &FitReport::epoch_seconds)
        .def_readonly("initial_loss", &FitReport::initial_loss)
        .def_readonly("final_loss", &FitReport::final_loss);

    m.def("loss", &loss, py::arg("weights"), py::arg("embeddings"), py::arg("target"),
          py::arg("pairs"));
    m.def("gradient", &gradient, py::arg("weights"), py::arg("embeddings"), py::arg("target"),
          py::arg("pairs"));
    m.def("fit", &fit, py::arg("tree"), py::arg("embeddings"), py::arg("target"),
          py::arg("config"), py::arg("progress") = FitProgress{});

    m.def("ali_k", &ali_k, py::arg("target"), py::arg("dataset"), py::arg("k"),
          py::arg("subset_cap") = 0);

    py::class_<RmseAlignment>(m, "RmseAlignment")
        .def_readonly("rmse", &RmseAlignment::rmse)
        .def_readonly("alpha", &RmseAlignment::alpha);
    m.def("rmse_align", &rmse_align, py::arg("d1"), py::arg("d2"));
    m.def("sample_pairs", &sample_pairs, py::arg("n_graphs"), py::arg("count"), py::arg("seed"));

    py::class_<HistogramRow>(m, "HistogramRow")
        .def_readonly("lo", &HistogramRow::lo)
        .def_readonly("hi", &HistogramRow::hi)
        .def_readonly("count", &HistogramRow::count);
    m.def("weight_histogram", &weight_histogram, py::arg("tree"), py::arg("bins"));
    m.def("save_histogram_csv", &save_histogram_csv, py::arg("rows"), py::arg("path"));

    py::class_<ColorReportEntry>(m, "ColorReportEntry")
        .def_readonly("color", &ColorReportEntry::color)
        .def_readonly("weight", &ColorReportEntry::weight)
        .def_readonly("level", &ColorReportEntry::level)
        .def_readonly("frequency", &ColorReportEntry::frequency)
        .def_readonly("graph_index", &ColorReportEntry::graph_index)
        .def_readonly("root_node", &ColorReportEntry::root_node);
    m.def("top_colors", &top_colors, py::arg("tree"), py::arg("dataset"), py::arg("assignment"),
          py::arg("m"), py::arg("min_frequency") = 0.01);
    m.def("export_occurrence", &export_occurrence, py::arg("entry"), py::arg("dataset"));
}
