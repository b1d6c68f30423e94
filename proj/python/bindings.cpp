// Python bindings for the toolkit core. Exposes the catalog, feature,
// training/evaluation, style-map, clustering, and pastiche operations with
// plain Python containers (dicts, lists, tuples) at the boundary.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "photoattr/catalog.hpp"
#include "photoattr/dendrogram.hpp"
#include "photoattr/errors.hpp"
#include "photoattr/eval.hpp"
#include "photoattr/featstore.hpp"
#include "photoattr/gist.hpp"
#include "photoattr/image.hpp"
#include "photoattr/kmeans.hpp"
#include "photoattr/lab.hpp"
#include "photoattr/pastiche.hpp"
#include "photoattr/runlog.hpp"
#include "photoattr/stylemaps.hpp"
#include "photoattr/surf.hpp"
#include "photoattr/svm.hpp"
#include "photoattr/synth.hpp"
#include "photoattr/tsne.hpp"

namespace py = pybind11;
using namespace photoattr;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Photographer-attribution toolkit core";
    m.attr("__version__") = "0.1.0";

    // Toolkit errors surface as ToolkitError("<code>: <message>").
    static py::exception<Error> exc(m, "ToolkitError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(exc.ptr(), (e.code() + ": " + e.what()).c_str());
        }
    });

    // ------------------------------------------------------------- catalog --
    py::class_<PhotoRecord>(m, "PhotoRecord")
        .def(py::init<>())
        .def(py::init([](std::string photo_id, std::string author_id, std::string path) {
                 PhotoRecord rec;
                 rec.photo_id = std::move(photo_id);
                 rec.author_id = std::move(author_id);
                 rec.path = std::move(path);
                 return rec;
             }),
             py::arg("photo_id"), py::arg("author_id"), py::arg("path"))
        .def_readwrite("photo_id", &PhotoRecord::photo_id)
        .def_readwrite("author_id", &PhotoRecord::author_id)
        .def_readwrite("path", &PhotoRecord::path)
        .def_readwrite("source_url", &PhotoRecord::source_url)
        .def_readwrite("title", &PhotoRecord::title)
        .def_readwrite("summary", &PhotoRecord::summary)
        .def_readwrite("subject", &PhotoRecord::subject)
        .def_readwrite("width", &PhotoRecord::width)
        .def_readwrite("height", &PhotoRecord::height);

    py::class_<Catalog>(m, "Catalog")
        .def(py::init<std::vector<PhotoRecord>>(), py::arg("records"))
        .def("records", &Catalog::records)
        .def("size", &Catalog::size)
        .def("__len__", &Catalog::size)
        .def("author_counts", &Catalog::author_counts)
        .def("authors", &Catalog::authors)
        .def("record", &Catalog::record, py::arg("photo_id"))
        .def("contains", &Catalog::contains, py::arg("photo_id"));

    py::enum_<SplitSet>(m, "SplitSet")
        .value("Train", SplitSet::Train)
        .value("Validation", SplitSet::Validation)
        .value("Test", SplitSet::Test);

    py::class_<SplitAssignment>(m, "SplitAssignment")
        .def_readonly("assignment", &SplitAssignment::assignment)
        .def_readonly("seed", &SplitAssignment::seed)
        .def("at", &SplitAssignment::at, py::arg("photo_id"))
        .def("ids_in", &SplitAssignment::ids_in, py::arg("split"))
        .def("count", &SplitAssignment::count, py::arg("split"));

    m.def("load_manifest", &load_manifest, py::arg("path"));
    m.def("write_manifest", &write_manifest, py::arg("catalog"), py::arg("path"));
    m.def("make_splits", &make_splits, py::arg("catalog"), py::arg("seed"));
    m.def("write_split_file", &write_split_file, py::arg("split"), py::arg("path"));
    m.def("read_split_file", &read_split_file, py::arg("path"));

    py::class_<TableCheck>(m, "TableCheck")
        .def_readonly("author_id", &TableCheck::author_id)
        .def_readonly("expected", &TableCheck::expected)
        .def_readonly("actual", &TableCheck::actual)
        .def_readonly("match", &TableCheck::match);
    py::class_<TableReport>(m, "TableReport")
        .def_readonly("checks", &TableReport::checks)
        .def_readonly("pass_", &TableReport::pass)
        .def("to_text", &TableReport::to_text);
    m.def("validate_against_table", &validate_against_table, py::arg("catalog"),
          py::arg("expected"));

    // -------------------------------------------------------------- images --
    py::class_<Image>(m, "Image")
        .def(py::init<>())
        .def_readonly("width", &Image::width)
        .def_readonly("height", &Image::height)
        .def_readonly("channels", &Image::channels)
        .def_property_readonly("pixels",
                               [](const Image& img) {
                                   return py::bytes(
                                       reinterpret_cast<const char*>(img.pixels.data()),
                                       img.pixels.size());
                               })
        .def("at",
             [](const Image& img, int x, int y, int c) { return img.at(x, y, c); },
             py::arg("x"), py::arg("y"), py::arg("c"));

    m.def("make_image", &make_image, py::arg("width"), py::arg("height"), py::arg("channels"),
          py::arg("fill") = 0);
    m.def("load_image", &load_image, py::arg("path"));
    m.def("save_image", &save_image, py::arg("image"), py::arg("path"));
    m.def("resize_bilinear", &resize_bilinear, py::arg("image"), py::arg("out_w"),
          py::arg("out_h"));

    // ------------------------------------------------------------ features --
    m.attr("LAB_HISTOGRAM_DIM") = kLabHistogramDim;
    m.attr("GIST_DIM") = kGistDim;
    m.attr("SURF_DESCRIPTOR_DIM") = kSurfDescriptorDim;
    m.def("lab_histogram", &lab_histogram, py::arg("image"));
    m.def("gist_descriptor", &gist_descriptor, py::arg("image"));

    py::class_<SurfParams>(m, "SurfParams")
        .def(py::init<>())
        .def_readwrite("hessian_threshold", &SurfParams::hessian_threshold)
        .def_readwrite("sampling_step", &SurfParams::sampling_step)
        .def_readwrite("max_keypoints", &SurfParams::max_keypoints);
    py::class_<SurfKeypoint>(m, "SurfKeypoint")
        .def_readonly("x", &SurfKeypoint::x)
        .def_readonly("y", &SurfKeypoint::y)
        .def_readonly("scale", &SurfKeypoint::scale)
        .def_readonly("response", &SurfKeypoint::response)
        .def_readonly("laplacian_positive", &SurfKeypoint::laplacian_positive);
    py::class_<DescriptorSet>(m, "DescriptorSet")
        .def_readonly("photo_id", &DescriptorSet::photo_id)
        .def_readonly("keypoints", &DescriptorSet::keypoints)
        .def_readonly("descriptors", &DescriptorSet::descriptors)
        .def("size", &DescriptorSet::size)
        .def("__len__", &DescriptorSet::size);
    m.def("extract_descriptors", &extract_descriptors, py::arg("image"),
          py::arg("params") = SurfParams{});

    py::class_<KMeansParams>(m, "KMeansParams")
        .def(py::init<>())
        .def_readwrite("k", &KMeansParams::k)
        .def_readwrite("max_iterations", &KMeansParams::max_iterations);
    py::class_<Vocabulary>(m, "Vocabulary")
        .def_readonly("k", &Vocabulary::k)
        .def_readonly("dim", &Vocabulary::dim)
        .def_readonly("centroids", &Vocabulary::centroids)
        .def_readonly("seed", &Vocabulary::seed)
        .def_readonly("final_objective", &Vocabulary::final_objective)
        .def_readonly("iterations", &Vocabulary::iterations)
        .def_readonly("objective_trace", &Vocabulary::objective_trace);
    m.def("build_vocabulary", &build_vocabulary, py::arg("data"), py::arg("dim"),
          py::arg("params"), py::arg("seed"));
    m.def("bow_encode", &bow_encode, py::arg("descriptors"), py::arg("dim"), py::arg("vocab"));
    m.def("write_vocabulary", &write_vocabulary, py::arg("vocab"), py::arg("path"));
    m.def("read_vocabulary", &read_vocabulary, py::arg("path"));

    // ------------------------------------------------------- feature store --
    py::class_<FeatureMatrix>(m, "FeatureMatrix")
        .def(py::init<>())
        .def(py::init<std::string, std::uint32_t>(), py::arg("feature_name"),
             py::arg("dimension"))
        .def("feature_name", &FeatureMatrix::feature_name)
        .def("set_feature_name", &FeatureMatrix::set_feature_name, py::arg("name"))
        .def("dimension", &FeatureMatrix::dimension)
        .def("rows", &FeatureMatrix::rows)
        .def("__len__", &FeatureMatrix::rows)
        .def("add_row", &FeatureMatrix::add_row, py::arg("photo_id"), py::arg("values"))
        .def("contains", &FeatureMatrix::contains, py::arg("photo_id"))
        .def("row", &FeatureMatrix::row, py::arg("photo_id"))
        .def("id_at", &FeatureMatrix::id_at, py::arg("i"))
        .def("row_at", &FeatureMatrix::row_at, py::arg("i"))
        .def("ids", &FeatureMatrix::ids);

    m.def("write_feature_file", &write_feature_file, py::arg("matrix"), py::arg("path"));
    m.def("read_feature_file", &read_feature_file, py::arg("path"),
          py::arg("expected_dimension") = py::none());

    py::class_<AuthorIndex>(m, "AuthorIndex")
        .def(py::init<>())
        .def(py::init([](std::vector<std::string> ids) {
                 AuthorIndex index;
                 index.author_ids = std::move(ids);
                 return index;
             }),
             py::arg("author_ids"))
        .def_readwrite("author_ids", &AuthorIndex::author_ids)
        .def("size", &AuthorIndex::size)
        .def("__len__", &AuthorIndex::size)
        .def("at", &AuthorIndex::at, py::arg("i"));
    m.def("top_rule_classify", &top_rule_classify, py::arg("fc8_row"), py::arg("index"));

    // --------------------------------------------------------- SVM + eval --
    py::class_<SvmParams>(m, "SvmParams")
        .def(py::init<>())
        .def_readwrite("C", &SvmParams::C)
        .def_readwrite("tolerance", &SvmParams::tolerance)
        .def_readwrite("max_epochs", &SvmParams::max_epochs);

    py::class_<LinearModel>(m, "LinearModel")
        .def_readonly("classes", &LinearModel::classes)
        .def_readonly("dim", &LinearModel::dim)
        .def_readonly("weights", &LinearModel::weights)
        .def_readonly("biases", &LinearModel::biases)
        .def_readonly("feature_name", &LinearModel::feature_name)
        .def_readonly("seed", &LinearModel::seed)
        .def_readonly("dual_trace", &LinearModel::dual_trace)
        .def("dual_objective", &LinearModel::dual_objective, py::arg("class_index"));

    m.def("train_ova_svm", &train_ova_svm, py::arg("features"), py::arg("labels"),
          py::arg("params"), py::arg("seed"));
    m.def("decision_values", &decision_values, py::arg("model"), py::arg("x"));
    m.def("predict", &predict, py::arg("model"), py::arg("x"));
    m.def("write_model", &write_model, py::arg("model"), py::arg("path"));
    m.def("read_model", &read_model, py::arg("path"));

    py::class_<ExplainResult>(m, "ExplainResult")
        .def_readonly("nearest_in_predicted", &ExplainResult::nearest_in_predicted)
        .def_readonly("distance_predicted", &ExplainResult::distance_predicted)
        .def_readonly("nearest_in_true", &ExplainResult::nearest_in_true)
        .def_readonly("distance_true", &ExplainResult::distance_true);
    m.def("weighted_nn_explain", &weighted_nn_explain, py::arg("model"), py::arg("features"),
          py::arg("labels"), py::arg("train_ids"), py::arg("test_id"),
          py::arg("predicted_class"), py::arg("true_class"));

    py::class_<EvalReport>(m, "EvalReport")
        .def_readonly("classes", &EvalReport::classes)
        .def_readonly("confusion", &EvalReport::confusion)
        .def_readonly("precision", &EvalReport::precision)
        .def_readonly("recall", &EvalReport::recall)
        .def_readonly("f1", &EvalReport::f1)
        .def_readonly("macro_f", &EvalReport::macro_f)
        .def_readonly("micro_f", &EvalReport::micro_f)
        .def("to_text", &EvalReport::to_text);
    m.def("report_from_confusion", &report_from_confusion, py::arg("classes"),
          py::arg("confusion"));
    m.def("evaluate", &evaluate, py::arg("model"), py::arg("features"), py::arg("labels"),
          py::arg("test_ids"));

    // ----------------------------------------------------------- stylemaps --
    py::class_<ChosenSynset>(m, "ChosenSynset")
        .def(py::init<>())
        .def(py::init([](std::string synset_id, std::string label) {
                 return ChosenSynset{std::move(synset_id), std::move(label)};
             }),
             py::arg("synset_id"), py::arg("label"))
        .def_readwrite("synset_id", &ChosenSynset::synset_id)
        .def_readwrite("label", &ChosenSynset::label);

    py::class_<CollapseMap>(m, "CollapseMap")
        .def_readonly("dims", &CollapseMap::dims)
        .def_readonly("labels", &CollapseMap::labels)
        .def_readonly("mapping", &CollapseMap::mapping)
        .def_readonly("group_sizes", &CollapseMap::group_sizes)
        .def("dimension", &CollapseMap::dimension);

    m.def("build_collapse_map", &build_collapse_map, py::arg("hierarchy"), py::arg("dims"),
          py::arg("chosen"), py::arg("fallback_label"));
    m.def("collapse_vector", &collapse_vector, py::arg("v"), py::arg("map"));

    py::class_<ResponseMatrix>(m, "ResponseMatrix")
        .def_readonly("row_ids", &ResponseMatrix::row_ids)
        .def_readonly("labels", &ResponseMatrix::labels)
        .def_readonly("cells", &ResponseMatrix::cells)
        .def_readonly("min_value", &ResponseMatrix::min_value)
        .def_readonly("max_value", &ResponseMatrix::max_value)
        .def("to_tsv", &ResponseMatrix::to_tsv);
    m.def("author_response_matrix", &author_response_matrix, py::arg("features"),
          py::arg("labels"), py::arg("map"));
    m.def("collapse_model_weights", &collapse_model_weights, py::arg("model"), py::arg("map"));
    m.def("top_k_categories", &top_k_categories, py::arg("features"), py::arg("labels"),
          py::arg("author_id"), py::arg("k"), py::arg("dim_labels"));
    m.def("load_hierarchy", &load_hierarchy, py::arg("path"));
    m.def("load_synset_list", &load_synset_list, py::arg("path"));

    // ---------------------------------------------------------------- tsne --
    py::class_<TsneParams>(m, "TsneParams")
        .def(py::init<>())
        .def_readwrite("perplexity", &TsneParams::perplexity)
        .def_readwrite("iterations", &TsneParams::iterations)
        .def_readwrite("learning_rate", &TsneParams::learning_rate)
        .def_readwrite("exaggeration", &TsneParams::exaggeration)
        .def_readwrite("exaggeration_iters", &TsneParams::exaggeration_iters)
        .def_readwrite("monotone_tail_iters", &TsneParams::monotone_tail_iters);

    py::class_<Embedding2D>(m, "Embedding2D")
        .def_readonly("ids", &Embedding2D::ids)
        .def_readonly("points", &Embedding2D::points)
        .def_readonly("kl_trace", &Embedding2D::kl_trace)
        .def_readonly("final_kl", &Embedding2D::final_kl)
        .def_readonly("perplexity", &Embedding2D::perplexity)
        .def_readonly("seed", &Embedding2D::seed)
        .def("to_tsv", &Embedding2D::to_tsv);

    py::class_<ConditionalGaussians>(m, "ConditionalGaussians")
        .def_readonly("n", &ConditionalGaussians::n)
        .def_readonly("p", &ConditionalGaussians::p)
        .def_readonly("entropies", &ConditionalGaussians::entropies)
        .def_readonly("betas", &ConditionalGaussians::betas);

    m.def("conditional_gaussians", &conditional_gaussians, py::arg("x"), py::arg("perplexity"));
    m.def("tsne_embed", &tsne_embed, py::arg("ids"), py::arg("x"), py::arg("params"),
          py::arg("seed"));

    // ----------------------------------------------------------- dendrogram --
    py::enum_<Metric>(m, "Metric")
        .value("Euclidean", Metric::Euclidean)
        .value("Cosine", Metric::Cosine);
    m.def("metric_from_string", &metric_from_string, py::arg("name"));

    py::class_<DendrogramMerge>(m, "DendrogramMerge")
        .def_readonly("node_id", &DendrogramMerge::node_id)
        .def_readonly("left", &DendrogramMerge::left)
        .def_readonly("right", &DendrogramMerge::right)
        .def_readonly("height", &DendrogramMerge::height);

    py::class_<Dendrogram>(m, "Dendrogram")
        .def_readonly("leaves", &Dendrogram::leaves)
        .def_readonly("merges", &Dendrogram::merges)
        .def("to_merge_list", &Dendrogram::to_merge_list)
        .def("to_bracket", &Dendrogram::to_bracket)
        .def("members_of", &Dendrogram::members_of, py::arg("node_id"));
    m.def("agglomerative_dendrogram", &agglomerative_dendrogram, py::arg("vectors"),
          py::arg("metric"));

    py::class_<GroupCohesion>(m, "GroupCohesion")
        .def_readonly("tag", &GroupCohesion::tag)
        .def_readonly("group_size", &GroupCohesion::group_size)
        .def_readonly("captured", &GroupCohesion::captured)
        .def_readonly("intruders", &GroupCohesion::intruders)
        .def_readonly("subtree", &GroupCohesion::subtree)
        .def_readonly("subtree_height", &GroupCohesion::subtree_height)
        .def_readonly("captured_members", &GroupCohesion::captured_members)
        .def_readonly("intruder_members", &GroupCohesion::intruder_members);
    py::class_<CohesionReport>(m, "CohesionReport")
        .def_readonly("groups", &CohesionReport::groups)
        .def("to_text", &CohesionReport::to_text);
    m.def("group_cohesion_report", &group_cohesion_report, py::arg("tree"), py::arg("group_of"));

    // -------------------------------------------------------------- pastiche --
    py::class_<DetectionRecord>(m, "DetectionRecord")
        .def(py::init<>())
        .def_readwrite("photo_id", &DetectionRecord::photo_id)
        .def_readwrite("object_class", &DetectionRecord::object_class)
        .def_readwrite("x0", &DetectionRecord::x0)
        .def_readwrite("y0", &DetectionRecord::y0)
        .def_readwrite("x1", &DetectionRecord::x1)
        .def_readwrite("y1", &DetectionRecord::y1)
        .def_readwrite("score", &DetectionRecord::score)
        .def_readwrite("mask_path", &DetectionRecord::mask_path);

    py::class_<SpatialModel>(m, "SpatialModel")
        .def_readonly("grid", &SpatialModel::grid)
        .def_readonly("mean_scale", &SpatialModel::mean_scale)
        .def_readonly("count", &SpatialModel::count);

    py::class_<SceneObjectModel>(m, "SceneObjectModel")
        .def(py::init<>())
        .def_readwrite("author_id", &SceneObjectModel::author_id)
        .def_readwrite("alpha", &SceneObjectModel::alpha)
        .def_readwrite("scenes", &SceneObjectModel::scenes)
        .def_readwrite("objects", &SceneObjectModel::objects)
        .def_readwrite("scene_dist", &SceneObjectModel::scene_dist)
        .def_readwrite("object_given_scene", &SceneObjectModel::object_given_scene)
        .def_readwrite("default_scale", &SceneObjectModel::default_scale)
        .def_readonly("spatial", &SceneObjectModel::spatial)
        .def("spatial_for", &SceneObjectModel::spatial_for, py::arg("scene"), py::arg("object"))
        .def("to_json", &SceneObjectModel::to_json)
        .def_static("from_json", &SceneObjectModel::from_json, py::arg("text"));

    m.def("fit_scene_distribution", &fit_scene_distribution, py::arg("scene_of"),
          py::arg("author_photos"), py::arg("scenes"), py::arg("alpha"));
    m.def("fit_object_given_scene", &fit_object_given_scene, py::arg("detections"),
          py::arg("scene_of"), py::arg("author_photos"), py::arg("scenes"), py::arg("objects"),
          py::arg("alpha"));
    m.def("fit_spatial_model", &fit_spatial_model, py::arg("detections"), py::arg("scene_of"),
          py::arg("photo_dims"), py::arg("scenes"), py::arg("objects"), py::arg("alpha"));
    m.def("fit_scene_object_model", &fit_scene_object_model, py::arg("author_id"),
          py::arg("detections"), py::arg("scene_of"), py::arg("author_photos"),
          py::arg("photo_dims"), py::arg("scenes"), py::arg("objects"), py::arg("alpha"));

    py::class_<Placement>(m, "Placement")
        .def_readonly("object_class", &Placement::object_class)
        .def_readonly("detection_index", &Placement::detection_index)
        .def_readonly("source_photo", &Placement::source_photo)
        .def_readonly("center_x", &Placement::center_x)
        .def_readonly("center_y", &Placement::center_y)
        .def_readonly("scale", &Placement::scale);

    py::class_<PasticheRecipe>(m, "PasticheRecipe")
        .def(py::init<>())
        .def_readwrite("author_id", &PasticheRecipe::author_id)
        .def_readwrite("scene", &PasticheRecipe::scene)
        .def_readwrite("background_photo", &PasticheRecipe::background_photo)
        .def_readonly("placements", &PasticheRecipe::placements)
        .def_readonly("seed", &PasticheRecipe::seed)
        .def("to_json", &PasticheRecipe::to_json)
        .def_static("from_json", &PasticheRecipe::from_json, py::arg("text"));

    m.def("sample_recipe", &sample_recipe, py::arg("model"), py::arg("scene_backgrounds"),
          py::arg("detections_by_class"), py::arg("seed"), py::arg("max_objects") = 5);
    m.def("compose_pastiche", &compose_pastiche, py::arg("recipe"), py::arg("background"),
          py::arg("crops"));
    m.def("load_scene_predictions", &load_scene_predictions, py::arg("path"));
    m.def("load_detections", &load_detections, py::arg("path"));
    m.def("load_label_list", &load_label_list, py::arg("path"));

    // ----------------------------------------------------------------- synth --
    py::class_<SynthParams>(m, "SynthParams")
        .def(py::init<>())
        .def_readwrite("authors", &SynthParams::authors)
        .def_readwrite("images_per_author", &SynthParams::images_per_author)
        .def_readwrite("width", &SynthParams::width)
        .def_readwrite("height", &SynthParams::height);

    py::class_<SynthDataset>(m, "SynthDataset")
        .def_readonly("records", &SynthDataset::records)
        .def("__len__", [](const SynthDataset& d) { return d.records.size(); });

    m.def("generate_synth_dataset", &generate_synth_dataset, py::arg("params"), py::arg("seed"));
    m.def(
        "write_synth_dataset",
        [](const SynthParams& params, std::uint64_t seed, const std::string& out_dir) {
            SynthDataset dataset = generate_synth_dataset(params, seed);
            write_synth_dataset(dataset, out_dir);
            return dataset.records.size();
        },
        py::arg("params"), py::arg("seed"), py::arg("out_dir"),
        "Generates a synthetic dataset and writes images plus manifest.jsonl into out_dir; "
        "returns the record count.");

    py::class_<BenchParams>(m, "BenchParams")
        .def(py::init<>())
        .def_readwrite("synth", &BenchParams::synth)
        .def_readwrite("vocab_size", &BenchParams::vocab_size)
        .def_readwrite("max_keypoints", &BenchParams::max_keypoints)
        .def_readwrite("max_vocab_descriptors", &BenchParams::max_vocab_descriptors)
        .def_readwrite("kmeans_iters", &BenchParams::kmeans_iters)
        .def_readwrite("svm_c", &BenchParams::svm_c);

    py::class_<BenchResult>(m, "BenchResult")
        .def_readonly("lab_report", &BenchResult::lab_report)
        .def_readonly("bow_report", &BenchResult::bow_report)
        .def_readonly("seed", &BenchResult::seed)
        .def("summary_text", &BenchResult::summary_text);

    m.def("run_synth_bench", &run_synth_bench, py::arg("params"), py::arg("seed"),
          py::arg("out_dir") = std::string());

    // ---------------------------------------------------------------- runlog --
    m.def(
        "fnv1a64_hex",
        [](const std::string& data) { return digest_hex(fnv1a64(data.data(), data.size())); },
        py::arg("data"));
    m.def("file_digest", &file_digest, py::arg("path"));
    m.def("append_run_record", &append_run_record, py::arg("log_path"), py::arg("subcommand"),
          py::arg("args"), py::arg("input_paths"));
}
