// photoattr: command-line entry point wiring the attribution toolkit into
// reproducible experiment recipes. One subcommand per invocation; every run
// appends a reproducibility record (config + seed + input digests) to the
// run log. Errors print a single machine-parsable line: ERROR <code>: <msg>.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "photoattr/catalog.hpp"
#include "photoattr/dendrogram.hpp"
#include "photoattr/errors.hpp"
#include "photoattr/eval.hpp"
#include "photoattr/featstore.hpp"
#include "photoattr/gist.hpp"
#include "photoattr/image.hpp"
#include "photoattr/kmeans.hpp"
#include "photoattr/lab.hpp"
#include "photoattr/parallel.hpp"
#include "photoattr/pastiche.hpp"
#include "photoattr/rng.hpp"
#include "photoattr/runlog.hpp"
#include "photoattr/stylemaps.hpp"
#include "photoattr/surf.hpp"
#include "photoattr/svm.hpp"
#include "photoattr/synth.hpp"
#include "photoattr/tsne.hpp"

namespace fs = std::filesystem;
using namespace photoattr;

namespace {

struct GlobalOptions {
    int threads = 0;
    std::string run_log = "photoattr_runs.log";
    bool no_run_log = false;
};

std::string resolve_photo_path(const std::string& manifest_path, const std::string& photo_path) {
    fs::path p(photo_path);
    if (p.is_absolute()) return photo_path;
    return (fs::path(manifest_path).parent_path() / p).string();
}

std::map<std::string, std::string> author_labels(const Catalog& catalog) {
    std::map<std::string, std::string> labels;
    for (const auto& rec : catalog.records()) labels[rec.photo_id] = rec.author_id;
    return labels;
}

SplitAssignment obtain_split(const Catalog& catalog, const std::string& split_path,
                             std::optional<std::uint64_t> seed) {
    if (!split_path.empty()) return read_split_file(split_path);
    if (seed) return make_splits(catalog, *seed);
    fail("BadFlag", "need either --split <file> or --seed <uint>");
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) fail("IoFailure", "cannot write '" + path + "'");
    out << text;
}

std::map<std::string, std::string> load_groups_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("IoFailure", "cannot open groups file '" + path + "'");
    std::map<std::string, std::string> groups;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
            fail("MalformedLine", "groups line " + std::to_string(lineno) +
                                      ": expected author_id<TAB>group_tag");
        groups[line.substr(0, tab)] = line.substr(tab + 1);
    }
    return groups;
}

// Author-mean vectors from a photo-level feature matrix.
std::map<std::string, std::vector<double>> author_means(
    const FeatureMatrix& features, const std::map<std::string, std::string>& labels) {
    std::map<std::string, std::pair<std::vector<double>, std::size_t>> acc;
    for (std::size_t r = 0; r < features.rows(); ++r) {
        auto it = labels.find(features.id_at(r));
        if (it == labels.end())
            fail("MissingLabel", "no author label for photo '" + features.id_at(r) + "'");
        auto& [sum, n] = acc[it->second];
        if (sum.empty()) sum.assign(features.dimension(), 0.0);
        const auto& row = features.row_at(r);
        for (std::size_t j = 0; j < row.size(); ++j) sum[j] += row[j];
        ++n;
    }
    std::map<std::string, std::vector<double>> means;
    for (auto& [author, pair] : acc) {
        auto& [sum, n] = pair;
        for (double& v : sum) v /= static_cast<double>(n);
        means[author] = std::move(sum);
    }
    return means;
}

// ---------------------------------------------------------------- ingest --

struct IngestArgs {
    std::string manifest;
    std::string expected_table;
    std::string splits_out;
    std::optional<std::uint64_t> seed;
    std::string in_features;
    std::string feature_name;
    std::optional<std::uint32_t> expect_dim;
    std::string out_features;
};

int run_ingest(const IngestArgs& a) {
    if (a.manifest.empty() == a.in_features.empty())
        fail("BadFlag", "ingest needs exactly one of --manifest or --in");
    if (!a.manifest.empty()) {
        Catalog catalog = load_manifest(a.manifest);
        std::cout << "records " << catalog.size() << "\nauthors " << catalog.authors().size()
                  << '\n';
        for (const auto& [author, count] : catalog.author_counts())
            std::cout << author << '\t' << count << '\n';
        if (!a.expected_table.empty()) {
            std::map<std::string, std::size_t> expected;
            std::ifstream in(a.expected_table);
            if (!in) fail("IoFailure", "cannot open expected table '" + a.expected_table + "'");
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty() || line[0] == '#') continue;
                auto tab = line.find('\t');
                if (tab == std::string::npos)
                    fail("MalformedLine", "expected table lines are author<TAB>count");
                expected[line.substr(0, tab)] =
                    static_cast<std::size_t>(std::stoull(line.substr(tab + 1)));
            }
            TableReport report = validate_against_table(catalog, expected);
            std::cout << report.to_text();
        }
        if (!a.splits_out.empty()) {
            if (!a.seed) fail("BadFlag", "--splits-out requires --seed");
            SplitAssignment split = make_splits(catalog, *a.seed);
            write_split_file(split, a.splits_out);
            std::cout << "splits " << split.count(SplitSet::Train) << " train, "
                      << split.count(SplitSet::Validation) << " validation, "
                      << split.count(SplitSet::Test) << " test -> " << a.splits_out << '\n';
        }
        return 0;
    }
    // Raw feature-file ingestion with dimension validation.
    FeatureMatrix matrix = read_feature_file(a.in_features, a.expect_dim);
    if (!a.feature_name.empty()) matrix.set_feature_name(a.feature_name);
    std::cout << "feature rows " << matrix.rows() << " dim " << matrix.dimension() << '\n';
    if (!a.out_features.empty()) write_feature_file(matrix, a.out_features);
    return 0;
}

// ----------------------------------------------------------------- vocab --

struct VocabArgs {
    std::string manifest;
    std::string out;
    std::uint64_t seed = 0;
    std::uint32_t k = 500;
    std::uint32_t max_iterations = 300;
    int max_keypoints = 1000;
    std::size_t max_descriptors = 200000;
    std::string split_path;  // when given, use only non-test photos
};

int run_vocab(const VocabArgs& a) {
    Catalog catalog = load_manifest(a.manifest);
    std::optional<SplitAssignment> split;
    if (!a.split_path.empty()) split = read_split_file(a.split_path);

    SurfParams sp;
    sp.max_keypoints = a.max_keypoints;
    std::vector<float> pool;
    for (const auto& rec : catalog.records()) {
        if (split && split->at(rec.photo_id) == SplitSet::Test) continue;
        Image img = load_image(resolve_photo_path(a.manifest, rec.path));
        DescriptorSet set = extract_descriptors(img, sp);
        pool.insert(pool.end(), set.descriptors.begin(), set.descriptors.end());
    }
    std::size_t n = pool.size() / kSurfDescriptorDim;
    if (n > a.max_descriptors) {
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        Rng rng(derive_seed(a.seed, 17));
        rng.shuffle(order);
        std::vector<float> sub;
        sub.reserve(a.max_descriptors * kSurfDescriptorDim);
        for (std::size_t i = 0; i < a.max_descriptors; ++i) {
            const float* row = pool.data() + order[i] * kSurfDescriptorDim;
            sub.insert(sub.end(), row, row + kSurfDescriptorDim);
        }
        pool = std::move(sub);
    }
    KMeansParams km;
    km.k = a.k;
    km.max_iterations = a.max_iterations;
    Vocabulary vocab = build_vocabulary(pool, kSurfDescriptorDim, km, a.seed);
    write_vocabulary(vocab, a.out);
    std::cout << "vocabulary k " << vocab.k << " from " << pool.size() / kSurfDescriptorDim
              << " descriptors, objective " << vocab.final_objective << ", iterations "
              << vocab.iterations << '\n';
    return 0;
}

// --------------------------------------------------------------- extract --

struct ExtractArgs {
    std::string manifest;
    std::string feature;  // lab30 | gist | surfbow500
    std::string out;
    std::string vocab_path;
    int max_keypoints = 1000;
};

int run_extract(const ExtractArgs& a) {
    Catalog catalog = load_manifest(a.manifest);
    FeatureMatrix matrix;
    if (a.feature == "lab30") {
        matrix = FeatureMatrix("lab30", kLabHistogramDim);
        for (const auto& rec : catalog.records()) {
            auto v = lab_histogram(load_image(resolve_photo_path(a.manifest, rec.path)));
            matrix.add_row(rec.photo_id, std::vector<float>(v.begin(), v.end()));
        }
    } else if (a.feature == "gist") {
        matrix = FeatureMatrix("gist", kGistDim);
        for (const auto& rec : catalog.records()) {
            auto v = gist_descriptor(load_image(resolve_photo_path(a.manifest, rec.path)));
            matrix.add_row(rec.photo_id, std::vector<float>(v.begin(), v.end()));
        }
    } else if (a.feature == "surfbow500") {
        if (a.vocab_path.empty()) fail("BadFlag", "--feature surfbow500 requires --vocab");
        Vocabulary vocab = read_vocabulary(a.vocab_path);
        matrix = FeatureMatrix("surfbow" + std::to_string(vocab.k), vocab.k);
        SurfParams sp;
        sp.max_keypoints = a.max_keypoints;
        for (const auto& rec : catalog.records()) {
            DescriptorSet set =
                extract_descriptors(load_image(resolve_photo_path(a.manifest, rec.path)), sp);
            auto v = bow_encode(set.descriptors, kSurfDescriptorDim, vocab);
            matrix.add_row(rec.photo_id, std::vector<float>(v.begin(), v.end()));
        }
    } else {
        fail("BadFlag", "unknown feature '" + a.feature + "' (expected lab30, gist or surfbow500)");
    }
    write_feature_file(matrix, a.out);
    std::cout << "wrote " << matrix.rows() << " x " << matrix.dimension() << " " << a.feature
              << " features to " << a.out << '\n';
    return 0;
}

// ----------------------------------------------------------------- train --

struct TrainArgs {
    std::string feature_file;
    std::string manifest;
    std::string split_path;
    std::optional<std::uint64_t> split_seed;
    double C = 1.0;
    double tolerance = 0.1;
    std::uint32_t max_epochs = 1000;
    std::uint64_t seed = 0;
    bool exclude_validation = false;
    std::string out;
};

int run_train(const TrainArgs& a) {
    Catalog catalog = load_manifest(a.manifest);
    FeatureMatrix features = read_feature_file(a.feature_file);
    SplitAssignment split = obtain_split(catalog, a.split_path, a.split_seed);

    // Default: train on train+validation (the validation carve-out matters
    // only to consumers that request it); --exclude-validation selects the
    // stricter mode.
    std::map<std::string, std::string> labels;
    for (const auto& rec : catalog.records()) {
        SplitSet set = split.at(rec.photo_id);
        if (set == SplitSet::Test) continue;
        if (a.exclude_validation && set == SplitSet::Validation) continue;
        labels[rec.photo_id] = rec.author_id;
    }

    SvmParams params;
    params.C = a.C;
    params.tolerance = a.tolerance;
    params.max_epochs = a.max_epochs;
    LinearModel model = train_ova_svm(features, labels, params, a.seed);
    model.feature_name = features.feature_name();
    write_model(model, a.out);
    std::cout << "trained " << model.classes.size() << "-class model on " << labels.size()
              << " photos (dim " << model.dim << ") -> " << a.out << '\n';
    return 0;
}

// ------------------------------------------------------------------ eval --

struct EvalArgs {
    std::string model_path;
    std::string feature_file;
    std::string manifest;
    std::string split_path;
    std::optional<std::uint64_t> split_seed;
    std::string report_path;
};

int run_eval(const EvalArgs& a) {
    Catalog catalog = load_manifest(a.manifest);
    FeatureMatrix features = read_feature_file(a.feature_file);
    LinearModel model = read_model(a.model_path);
    SplitAssignment split = obtain_split(catalog, a.split_path, a.split_seed);

    EvalReport report =
        evaluate(model, features, author_labels(catalog), split.ids_in(SplitSet::Test));
    std::cout << "macro-F " << report.macro_f << " micro-F " << report.micro_f << '\n';
    if (!a.report_path.empty()) write_text(a.report_path, report.to_text());
    return 0;
}

// --------------------------------------------------------------- explain --

struct ExplainArgs {
    std::string model_path;
    std::string feature_file;
    std::string manifest;
    std::string split_path;
    std::optional<std::uint64_t> split_seed;
    std::string photo_id;
};

int run_explain(const ExplainArgs& a) {
    Catalog catalog = load_manifest(a.manifest);
    FeatureMatrix features = read_feature_file(a.feature_file);
    LinearModel model = read_model(a.model_path);
    SplitAssignment split = obtain_split(catalog, a.split_path, a.split_seed);

    if (!features.contains(a.photo_id))
        fail("MissingFeatureRow", "no feature row for photo '" + a.photo_id + "'");
    std::string predicted = predict(model, features.row(a.photo_id));
    std::string true_author = catalog.record(a.photo_id).author_id;

    std::vector<std::string> train_ids;
    for (const auto& rec : catalog.records())
        if (split.at(rec.photo_id) != SplitSet::Test && rec.photo_id != a.photo_id)
            train_ids.push_back(rec.photo_id);

    ExplainResult result = weighted_nn_explain(model, features, author_labels(catalog), train_ids,
                                               a.photo_id, predicted, true_author);
    std::cout << "photo " << a.photo_id << "\npredicted " << predicted << "\ntrue " << true_author
              << "\nnearest_in_predicted " << result.nearest_in_predicted << " distance "
              << result.distance_predicted << "\nnearest_in_true " << result.nearest_in_true
              << " distance " << result.distance_true << '\n';
    return 0;
}

// -------------------------------------------------------------- stylemap --

struct StylemapArgs {
    std::string fc8_path;
    std::string hierarchy_path;
    std::string chosen_path;
    std::string dims_path;
    std::string mode = "mean";  // mean | svm
    std::string manifest;
    std::string model_path;
    std::string fallback = "other";
    std::string out;
};

int run_stylemap(const StylemapArgs& a) {
    Hierarchy hierarchy = load_hierarchy(a.hierarchy_path);
    auto chosen = load_synset_list(a.chosen_path);
    auto dim_entries = load_synset_list(a.dims_path);
    std::vector<std::string> dims;
    for (const auto& e : dim_entries) dims.push_back(e.synset_id);
    CollapseMap map = build_collapse_map(hierarchy, dims, chosen, a.fallback);

    ResponseMatrix matrix;
    if (a.mode == "mean") {
        if (a.manifest.empty()) fail("BadFlag", "--mode mean requires --manifest");
        FeatureMatrix features = read_feature_file(a.fc8_path);
        matrix = author_response_matrix(features, author_labels(load_manifest(a.manifest)), map);
    } else if (a.mode == "svm") {
        if (a.model_path.empty()) fail("BadFlag", "--mode svm requires --model");
        matrix = collapse_model_weights(read_model(a.model_path), map);
    } else {
        fail("BadFlag", "--mode must be mean or svm");
    }
    std::string tsv = matrix.to_tsv();
    if (a.out.empty())
        std::cout << tsv;
    else
        write_text(a.out, tsv);
    std::cout << "rows " << matrix.row_ids.size() << " labels " << matrix.labels.size()
              << " range [" << matrix.min_value << ", " << matrix.max_value << "]\n";
    return 0;
}

// ------------------------------------------------------------------ topk --

struct TopkArgs {
    std::string fc8_path;
    std::string manifest;
    std::string dims_path;
    std::string author;
    std::size_t k = 10;
};

int run_topk(const TopkArgs& a) {
    FeatureMatrix features = read_feature_file(a.fc8_path);
    auto dim_entries = load_synset_list(a.dims_path);
    std::vector<std::string> dim_labels;
    for (const auto& e : dim_entries) dim_labels.push_back(e.label);
    auto top = top_k_categories(features, author_labels(load_manifest(a.manifest)), a.author, a.k,
                                dim_labels);
    for (std::size_t i = 0; i < top.size(); ++i)
        std::cout << i + 1 << '\t' << top[i] << '\n';
    return 0;
}

// ------------------------------------------------------------------ tsne --

struct TsneArgs {
    std::string feature_file;
    std::string out;
    std::uint64_t seed = 0;
    double perplexity = 30.0;
    std::uint32_t iterations = 1000;
    std::string aggregate;  // "" (photo rows) or "author"
    std::string manifest;
};

int run_tsne(const TsneArgs& a) {
    FeatureMatrix features = read_feature_file(a.feature_file);
    std::vector<std::string> ids;
    std::vector<std::vector<double>> rows;
    if (a.aggregate == "author") {
        if (a.manifest.empty()) fail("BadFlag", "--aggregate author requires --manifest");
        for (auto& [author, mean] : author_means(features, author_labels(load_manifest(a.manifest)))) {
            ids.push_back(author);
            rows.push_back(mean);
        }
    } else if (a.aggregate.empty()) {
        for (std::size_t r = 0; r < features.rows(); ++r) {
            ids.push_back(features.id_at(r));
            const auto& row = features.row_at(r);
            rows.emplace_back(row.begin(), row.end());
        }
    } else {
        fail("BadFlag", "--aggregate must be omitted or 'author'");
    }
    TsneParams params;
    params.perplexity = a.perplexity;
    params.iterations = a.iterations;
    Embedding2D embedding = tsne_embed(ids, rows, params, a.seed);
    write_text(a.out, embedding.to_tsv());
    std::cout << "embedded " << ids.size() << " points, final KL " << embedding.final_kl << '\n';
    return 0;
}

// ---------------------------------------------------------------- dendro --

struct DendroArgs {
    std::string feature_file;
    std::string manifest;
    std::string metric = "cosine";
    std::string groups_path;
    std::string out;
};

int run_dendro(const DendroArgs& a) {
    FeatureMatrix features = read_feature_file(a.feature_file);
    auto means = author_means(features, author_labels(load_manifest(a.manifest)));
    Dendrogram tree = agglomerative_dendrogram(means, metric_from_string(a.metric));
    std::ostringstream os;
    os << tree.to_merge_list() << '\n' << tree.to_bracket() << '\n';
    if (!a.groups_path.empty()) {
        CohesionReport report = group_cohesion_report(tree, load_groups_file(a.groups_path));
        os << '\n' << report.to_text();
    }
    if (a.out.empty())
        std::cout << os.str();
    else
        write_text(a.out, os.str());
    std::cout << "clustered " << tree.leaves.size() << " authors, " << tree.merges.size()
              << " merges\n";
    return 0;
}

int run_cohesion(const DendroArgs& a) {
    if (a.groups_path.empty()) fail("BadFlag", "cohesion requires --groups");
    FeatureMatrix features = read_feature_file(a.feature_file);
    auto means = author_means(features, author_labels(load_manifest(a.manifest)));
    Dendrogram tree = agglomerative_dendrogram(means, metric_from_string(a.metric));
    CohesionReport report = group_cohesion_report(tree, load_groups_file(a.groups_path));
    if (a.out.empty())
        std::cout << report.to_text();
    else
        write_text(a.out, report.to_text());
    return 0;
}

// -------------------------------------------------------------- pastiche --

struct PasticheFitArgs {
    std::string author;
    std::string manifest;
    std::string scenes_path;
    std::string objects_path;
    std::string scene_preds_path;
    std::string detections_path;
    double alpha = 1.0;
    std::string out;
};

int run_pastiche_fit(const PasticheFitArgs& a) {
    Catalog catalog = load_manifest(a.manifest);
    auto scenes = load_label_list(a.scenes_path);
    auto objects = load_label_list(a.objects_path);
    auto scene_of = load_scene_predictions(a.scene_preds_path);
    auto detections = load_detections(a.detections_path);

    std::vector<std::string> author_photos;
    std::map<std::string, std::pair<std::uint32_t, std::uint32_t>> dims;
    for (const auto& rec : catalog.records()) {
        if (rec.author_id != a.author) continue;
        author_photos.push_back(rec.photo_id);
        if (rec.width && rec.height) dims[rec.photo_id] = {*rec.width, *rec.height};
    }
    if (author_photos.empty()) fail("UnknownAuthor", "no photos for author '" + a.author + "'");

    // Restrict detections to this author's photos before fitting.
    std::set<std::string> photo_set(author_photos.begin(), author_photos.end());
    std::vector<DetectionRecord> own;
    for (const auto& det : detections)
        if (photo_set.count(det.photo_id)) own.push_back(det);

    SceneObjectModel model = fit_scene_object_model(a.author, own, scene_of, author_photos, dims,
                                                    scenes, objects, a.alpha);
    write_text(a.out, model.to_json());
    std::cout << "fitted scene/object model for " << a.author << " from " << author_photos.size()
              << " photos, " << own.size() << " detections -> " << a.out << '\n';
    return 0;
}

struct PasticheSampleArgs {
    std::string model_path;
    std::string manifest;
    std::string scene_preds_path;
    std::string detections_path;
    std::uint64_t seed = 0;
    std::size_t n = 10;
    std::size_t max_objects = 5;
    std::string out_dir;
    bool compose = false;
};

int run_pastiche_sample(const PasticheSampleArgs& a) {
    SceneObjectModel model = [&] {
        std::ifstream in(a.model_path);
        if (!in) fail("IoFailure", "cannot open model '" + a.model_path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return SceneObjectModel::from_json(ss.str());
    }();
    Catalog catalog = load_manifest(a.manifest);
    auto scene_of = load_scene_predictions(a.scene_preds_path);
    auto detections = load_detections(a.detections_path);

    // Candidate backgrounds: the author's photos grouped by predicted scene.
    std::map<std::string, std::vector<std::string>> scene_backgrounds;
    std::set<std::string> author_photos;
    for (const auto& rec : catalog.records()) {
        if (rec.author_id != model.author_id) continue;
        author_photos.insert(rec.photo_id);
        auto it = scene_of.find(rec.photo_id);
        if (it != scene_of.end()) scene_backgrounds[it->second].push_back(rec.photo_id);
    }
    std::map<std::string, std::vector<DetectionRecord>> by_class;
    for (const auto& det : detections)
        if (author_photos.count(det.photo_id)) by_class[det.object_class].push_back(det);

    std::error_code ec;
    fs::create_directories(a.out_dir, ec);
    if (ec) fail("IoFailure", "cannot create '" + a.out_dir + "': " + ec.message());

    for (std::size_t i = 0; i < a.n; ++i) {
        PasticheRecipe recipe =
            sample_recipe(model, scene_backgrounds, by_class, derive_seed(a.seed, i), a.max_objects);
        std::string stem = "pastiche_" + std::to_string(i);
        write_text((fs::path(a.out_dir) / (stem + ".json")).string(), recipe.to_json());
        if (a.compose) {
            Image background = load_image(
                resolve_photo_path(a.manifest, catalog.record(recipe.background_photo).path));
            std::vector<std::pair<Image, Image>> crops;
            for (const auto& pl : recipe.placements) {
                const DetectionRecord& det = by_class.at(pl.object_class)[pl.detection_index];
                Image source = load_image(
                    resolve_photo_path(a.manifest, catalog.record(det.photo_id).path));
                int x0 = static_cast<int>(det.x0), y0 = static_cast<int>(det.y0);
                int w = std::max(1, static_cast<int>(det.x1) - x0);
                int h = std::max(1, static_cast<int>(det.y1) - y0);
                Image crop = make_image(w, h, source.channels);
                for (int y = 0; y < h; ++y)
                    for (int x = 0; x < w; ++x)
                        for (int c = 0; c < source.channels; ++c)
                            crop.at(x, y, c) = source.at(
                                std::min(x0 + x, source.width - 1),
                                std::min(y0 + y, source.height - 1), c);
                Image mask;
                if (!det.mask_path.empty()) {
                    mask = load_image(resolve_photo_path(a.manifest, det.mask_path));
                    if (mask.channels != 1)
                        fail("MaskShapeMismatch", "mask '" + det.mask_path + "' must be single-channel");
                } else {
                    mask = make_image(w, h, 1, 255);
                }
                crops.emplace_back(std::move(crop), std::move(mask));
            }
            Image composite = compose_pastiche(recipe, background, crops);
            save_image(composite, (fs::path(a.out_dir) / (stem + ".ppm")).string());
        }
    }
    std::cout << "wrote " << a.n << " recipes to " << a.out_dir << '\n';
    return 0;
}

// ----------------------------------------------------------- synth-bench --

struct SynthBenchArgs {
    std::uint64_t seed = 0;
    std::string out_dir;
    std::size_t authors = 8;
    std::size_t images_per_author = 200;
    std::size_t vocab_size = 500;
    std::size_t max_keypoints = 30;
    std::uint32_t kmeans_iters = 25;
};

int run_synth_bench_cmd(const SynthBenchArgs& a) {
    BenchParams params;
    params.synth.authors = a.authors;
    params.synth.images_per_author = a.images_per_author;
    params.vocab_size = a.vocab_size;
    params.max_keypoints = a.max_keypoints;
    params.kmeans_iters = a.kmeans_iters;
    BenchResult result = run_synth_bench(params, a.seed, a.out_dir);
    std::cout << result.summary_text();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"photographer-attribution toolkit"};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--threads", global.threads, "worker threads (0 = auto)");
    app.add_option("--run-log", global.run_log, "append-only reproducibility log path");
    app.add_flag("--no-run-log", global.no_run_log, "skip the run log record");

    IngestArgs ingest;
    auto* ingest_cmd = app.add_subcommand("ingest", "validate a manifest or a raw feature file");
    ingest_cmd->add_option("--manifest", ingest.manifest, "manifest JSON-lines path");
    ingest_cmd->add_option("--expected-table", ingest.expected_table, "author<TAB>count table");
    ingest_cmd->add_option("--splits-out", ingest.splits_out, "write a split file here");
    ingest_cmd->add_option("--seed", ingest.seed, "split seed");
    ingest_cmd->add_option("--in", ingest.in_features, "raw PFV1 feature file to ingest");
    ingest_cmd->add_option("--feature-name", ingest.feature_name, "name for ingested features");
    ingest_cmd->add_option("--expect-dim", ingest.expect_dim, "required feature dimension");
    ingest_cmd->add_option("--out", ingest.out_features, "rewrite ingested features here");

    VocabArgs vocab;
    auto* vocab_cmd = app.add_subcommand("vocab", "build a SURF visual vocabulary");
    vocab_cmd->add_option("--manifest", vocab.manifest)->required();
    vocab_cmd->add_option("--out", vocab.out)->required();
    vocab_cmd->add_option("--seed", vocab.seed)->required();
    vocab_cmd->add_option("--k", vocab.k, "vocabulary size");
    vocab_cmd->add_option("--max-iterations", vocab.max_iterations);
    vocab_cmd->add_option("--max-keypoints", vocab.max_keypoints, "per-image keypoint cap");
    vocab_cmd->add_option("--max-descriptors", vocab.max_descriptors, "descriptor pool cap");
    vocab_cmd->add_option("--split", vocab.split_path, "exclude this split file's test photos");

    ExtractArgs extract;
    auto* extract_cmd = app.add_subcommand("extract", "compute image features");
    extract_cmd->add_option("--manifest", extract.manifest)->required();
    extract_cmd->add_option("--feature", extract.feature, "lab30 | gist | surfbow500")->required();
    extract_cmd->add_option("--out", extract.out)->required();
    extract_cmd->add_option("--vocab", extract.vocab_path, "vocabulary for surfbow500");
    extract_cmd->add_option("--max-keypoints", extract.max_keypoints);

    TrainArgs train;
    auto* train_cmd = app.add_subcommand("train", "train one-vs-all linear SVMs");
    train_cmd->add_option("--feature", train.feature_file)->required();
    train_cmd->add_option("--manifest", train.manifest)->required();
    train_cmd->add_option("--split", train.split_path, "split file");
    train_cmd->add_option("--split-seed", train.split_seed, "recompute splits from this seed");
    train_cmd->add_option("--C", train.C, "SVM cost");
    train_cmd->add_option("--tolerance", train.tolerance);
    train_cmd->add_option("--max-epochs", train.max_epochs);
    train_cmd->add_option("--seed", train.seed, "training permutation seed")->required();
    train_cmd->add_flag("--exclude-validation", train.exclude_validation,
                        "leave the validation carve-out out of training");
    train_cmd->add_option("--out", train.out)->required();

    EvalArgs eval_args;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a model on the test split");
    eval_cmd->add_option("--model", eval_args.model_path)->required();
    eval_cmd->add_option("--feature", eval_args.feature_file)->required();
    eval_cmd->add_option("--manifest", eval_args.manifest)->required();
    eval_cmd->add_option("--split", eval_args.split_path);
    eval_cmd->add_option("--split-seed", eval_args.split_seed);
    eval_cmd->add_option("--report", eval_args.report_path, "write the report here");

    ExplainArgs explain;
    auto* explain_cmd = app.add_subcommand("explain", "nearest-neighbor explanation for a photo");
    explain_cmd->add_option("--model", explain.model_path)->required();
    explain_cmd->add_option("--feature", explain.feature_file)->required();
    explain_cmd->add_option("--manifest", explain.manifest)->required();
    explain_cmd->add_option("--split", explain.split_path);
    explain_cmd->add_option("--split-seed", explain.split_seed);
    explain_cmd->add_option("--photo", explain.photo_id)->required();

    StylemapArgs stylemap;
    auto* stylemap_cmd = app.add_subcommand("stylemap", "collapse responses to coarse categories");
    stylemap_cmd->add_option("--fc8", stylemap.fc8_path, "per-photo response features");
    stylemap_cmd->add_option("--hierarchy", stylemap.hierarchy_path)->required();
    stylemap_cmd->add_option("--chosen", stylemap.chosen_path)->required();
    stylemap_cmd->add_option("--dims", stylemap.dims_path, "synset id per feature dimension")
        ->required();
    stylemap_cmd->add_option("--mode", stylemap.mode, "mean | svm");
    stylemap_cmd->add_option("--manifest", stylemap.manifest);
    stylemap_cmd->add_option("--model", stylemap.model_path);
    stylemap_cmd->add_option("--fallback", stylemap.fallback);
    stylemap_cmd->add_option("--out", stylemap.out);

    TopkArgs topk;
    auto* topk_cmd = app.add_subcommand("topk", "top responding categories for an author");
    topk_cmd->add_option("--fc8", topk.fc8_path)->required();
    topk_cmd->add_option("--manifest", topk.manifest)->required();
    topk_cmd->add_option("--dims", topk.dims_path)->required();
    topk_cmd->add_option("--author", topk.author)->required();
    topk_cmd->add_option("--k", topk.k);

    TsneArgs tsne;
    auto* tsne_cmd = app.add_subcommand("tsne", "2-d embedding of feature rows");
    tsne_cmd->add_option("--feature", tsne.feature_file)->required();
    tsne_cmd->add_option("--out", tsne.out)->required();
    tsne_cmd->add_option("--seed", tsne.seed)->required();
    tsne_cmd->add_option("--perplexity", tsne.perplexity);
    tsne_cmd->add_option("--iterations", tsne.iterations);
    tsne_cmd->add_option("--aggregate", tsne.aggregate, "'author' embeds author means");
    tsne_cmd->add_option("--manifest", tsne.manifest);

    DendroArgs dendro;
    auto* dendro_cmd = app.add_subcommand("dendro", "average-linkage author dendrogram");
    dendro_cmd->add_option("--feature", dendro.feature_file)->required();
    dendro_cmd->add_option("--manifest", dendro.manifest)->required();
    dendro_cmd->add_option("--metric", dendro.metric, "euclidean | cosine");
    dendro_cmd->add_option("--groups", dendro.groups_path, "author<TAB>group_tag file");
    dendro_cmd->add_option("--out", dendro.out);

    DendroArgs cohesion;
    auto* cohesion_cmd = app.add_subcommand("cohesion", "group cohesion inside the dendrogram");
    cohesion_cmd->add_option("--feature", cohesion.feature_file)->required();
    cohesion_cmd->add_option("--manifest", cohesion.manifest)->required();
    cohesion_cmd->add_option("--metric", cohesion.metric);
    cohesion_cmd->add_option("--groups", cohesion.groups_path)->required();
    cohesion_cmd->add_option("--out", cohesion.out);

    auto* pastiche_cmd = app.add_subcommand("pastiche", "scene/object style models and sampling");
    pastiche_cmd->require_subcommand(1);
    PasticheFitArgs pfit;
    auto* pfit_cmd = pastiche_cmd->add_subcommand("fit", "fit an author's scene/object model");
    pfit_cmd->add_option("--author", pfit.author)->required();
    pfit_cmd->add_option("--manifest", pfit.manifest)->required();
    pfit_cmd->add_option("--scenes", pfit.scenes_path)->required();
    pfit_cmd->add_option("--objects", pfit.objects_path)->required();
    pfit_cmd->add_option("--scene-preds", pfit.scene_preds_path)->required();
    pfit_cmd->add_option("--detections", pfit.detections_path)->required();
    pfit_cmd->add_option("--alpha", pfit.alpha, "Laplace smoothing");
    pfit_cmd->add_option("--out", pfit.out)->required();

    PasticheSampleArgs psample;
    auto* psample_cmd = pastiche_cmd->add_subcommand("sample", "sample pastiche recipes");
    psample_cmd->add_option("--model", psample.model_path)->required();
    psample_cmd->add_option("--manifest", psample.manifest)->required();
    psample_cmd->add_option("--scene-preds", psample.scene_preds_path)->required();
    psample_cmd->add_option("--detections", psample.detections_path)->required();
    psample_cmd->add_option("--seed", psample.seed)->required();
    psample_cmd->add_option("--n", psample.n, "number of recipes");
    psample_cmd->add_option("--max-objects", psample.max_objects);
    psample_cmd->add_option("--out-dir", psample.out_dir)->required();
    psample_cmd->add_flag("--compose", psample.compose, "also composite the images");

    SynthBenchArgs bench;
    auto* bench_cmd = app.add_subcommand("synth-bench", "synthetic end-to-end benchmark");
    bench_cmd->add_option("--seed", bench.seed)->required();
    bench_cmd->add_option("--out", bench.out_dir, "write dataset and artifacts here");
    bench_cmd->add_option("--authors", bench.authors);
    bench_cmd->add_option("--images-per-author", bench.images_per_author);
    bench_cmd->add_option("--vocab-size", bench.vocab_size);
    bench_cmd->add_option("--max-keypoints", bench.max_keypoints);
    bench_cmd->add_option("--kmeans-iters", bench.kmeans_iters);

    // Let global flags (--threads, --run-log, ...) appear after the
    // subcommand name as well.
    for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();
    pfit_cmd->fallthrough();
    psample_cmd->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        set_thread_count(global.threads);

        // Reproducibility record: full argv + digests of the file inputs.
        if (!global.no_run_log) {
            std::vector<std::string> args(argv + 1, argv + argc);
            std::vector<std::string> inputs;
            for (int i = 1; i + 1 < argc; ++i) {
                std::string flag = argv[i];
                if (flag == "--manifest" || flag == "--feature" || flag == "--model" ||
                    flag == "--in" || flag == "--vocab" || flag == "--split" ||
                    flag == "--fc8" || flag == "--hierarchy" || flag == "--chosen" ||
                    flag == "--dims" || flag == "--groups" || flag == "--scenes" ||
                    flag == "--objects" || flag == "--scene-preds" || flag == "--detections") {
                    if (fs::exists(argv[i + 1])) inputs.push_back(argv[i + 1]);
                }
            }
            append_run_record(global.run_log, app.get_subcommands().front()->get_name(), args,
                              inputs);
        }

        if (*ingest_cmd) return run_ingest(ingest);
        if (*vocab_cmd) return run_vocab(vocab);
        if (*extract_cmd) return run_extract(extract);
        if (*train_cmd) return run_train(train);
        if (*eval_cmd) return run_eval(eval_args);
        if (*explain_cmd) return run_explain(explain);
        if (*stylemap_cmd) return run_stylemap(stylemap);
        if (*topk_cmd) return run_topk(topk);
        if (*tsne_cmd) return run_tsne(tsne);
        if (*dendro_cmd) return run_dendro(dendro);
        if (*cohesion_cmd) return run_cohesion(cohesion);
        if (*pfit_cmd) return run_pastiche_fit(pfit);
        if (*psample_cmd) return run_pastiche_sample(psample);
        if (*bench_cmd) return run_synth_bench_cmd(bench);
        fail("UnknownSubcommand", "no subcommand dispatched");
    } catch (const Error& e) {
        std::cerr << "ERROR " << e.code() << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "ERROR Internal: " << e.what() << '\n';
        return 2;
    }
}
