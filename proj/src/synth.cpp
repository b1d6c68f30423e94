#include "photoattr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "photoattr/errors.hpp"
#include "photoattr/featstore.hpp"
#include "photoattr/lab.hpp"
#include "photoattr/rng.hpp"
#include "photoattr/surf.hpp"
#include "photoattr/svm.hpp"

namespace photoattr {

namespace {

enum class TextureKind { HStripes, VStripes, DiagStripes, CheckersBig, CheckersSmall, DotsSmall,
                         DotsBig, Rings };

struct AuthorStyle {
    TextureKind kind;
    double period;
    std::array<int, 3> bg;
    std::array<int, 3> fg;
};

// One fixed style per synthetic author: palette + texture family + scale.
constexpr AuthorStyle kStyles[8] = {
    {TextureKind::HStripes, 8.0, {140, 30, 30}, {235, 220, 120}},
    {TextureKind::VStripes, 16.0, {25, 35, 90}, {120, 215, 235}},
    {TextureKind::CheckersBig, 12.0, {20, 70, 30}, {150, 220, 140}},
    {TextureKind::CheckersSmall, 6.0, {90, 40, 120}, {235, 150, 60}},
    {TextureKind::DotsSmall, 16.0, {110, 70, 40}, {240, 240, 230}},
    {TextureKind::DotsBig, 26.0, {20, 110, 110}, {240, 150, 190}},
    {TextureKind::DiagStripes, 12.0, {120, 120, 125}, {200, 40, 40}},
    {TextureKind::Rings, 14.0, {15, 15, 20}, {140, 190, 235}},
};

std::uint8_t clamp8(int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); }

Image render_synth_image(const AuthorStyle& style, int width, int height, Rng& rng) {
    std::array<int, 3> bg{}, fg{};
    for (int c = 0; c < 3; ++c) {
        bg[c] = style.bg[c] + static_cast<int>(rng.below(25)) - 12;
        fg[c] = style.fg[c] + static_cast<int>(rng.below(25)) - 12;
    }
    const double period = style.period;
    const double phase_x = rng.uniform() * period;
    const double phase_y = rng.uniform() * period;
    const double angle = 3.14159265358979 / 4.0 + (rng.uniform() - 0.5) * 0.3;
    const double cx = width / 2.0 + (rng.uniform() - 0.5) * 30.0;
    const double cy = height / 2.0 + (rng.uniform() - 0.5) * 30.0;

    Image img = make_image(width, height, 3);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            bool on = false;
            switch (style.kind) {
                case TextureKind::HStripes:
                    on = std::fmod(y + phase_y, period) < period / 2.0;
                    break;
                case TextureKind::VStripes:
                    on = std::fmod(x + phase_x, period) < period / 2.0;
                    break;
                case TextureKind::DiagStripes: {
                    double t = x * std::cos(angle) + y * std::sin(angle);
                    on = std::fmod(t + phase_x + 4.0 * period, period) < period / 2.0;
                    break;
                }
                case TextureKind::CheckersBig:
                case TextureKind::CheckersSmall: {
                    auto ix = static_cast<long>(std::floor((x + phase_x) / period));
                    auto iy = static_cast<long>(std::floor((y + phase_y) / period));
                    on = (ix + iy) % 2 == 0;
                    break;
                }
                case TextureKind::DotsSmall:
                case TextureKind::DotsBig: {
                    double lx = std::fmod(x + phase_x, period) - period / 2.0;
                    double ly = std::fmod(y + phase_y, period) - period / 2.0;
                    double radius = style.kind == TextureKind::DotsSmall ? period * 0.28 : period * 0.34;
                    on = lx * lx + ly * ly <= radius * radius;
                    break;
                }
                case TextureKind::Rings: {
                    double r = std::hypot(x - cx, y - cy);
                    on = std::fmod(r + phase_x, period) < period / 2.0;
                    break;
                }
            }
            const auto& base = on ? fg : bg;
            int noise = static_cast<int>(rng.below(13)) - 6;
            for (int c = 0; c < 3; ++c) img.at(x, y, c) = clamp8(base[c] + noise);
        }
    return img;
}

std::string zero_pad(std::size_t v, int width) {
    std::ostringstream os;
    os.width(width);
    os.fill('0');
    os << v;
    return os.str();
}

}  // namespace

SynthDataset generate_synth_dataset(const SynthParams& params, std::uint64_t seed) {
    if (params.authors < 2 || params.authors > 8)
        fail("BadParams", "synthetic corpus supports 2 to 8 authors");
    if (params.images_per_author < 1) fail("BadParams", "need at least 1 image per author");
    if (params.width < 32 || params.height < 32)
        fail("BadParams", "synthetic images must be at least 32x32");

    SynthDataset out;
    for (std::size_t a = 0; a < params.authors; ++a) {
        const std::string author = "author" + std::to_string(a);
        for (std::size_t i = 0; i < params.images_per_author; ++i) {
            std::size_t global = a * params.images_per_author + i;
            Rng rng(derive_seed(seed, global));
            PhotoRecord rec;
            rec.photo_id = author + "_" + zero_pad(i, 4);
            rec.author_id = author;
            rec.path = "images/" + rec.photo_id + ".ppm";
            rec.width = static_cast<std::uint32_t>(params.width);
            rec.height = static_cast<std::uint32_t>(params.height);
            out.records.push_back(rec);
            out.images.push_back(render_synth_image(kStyles[a], params.width, params.height, rng));
        }
    }
    return out;
}

void write_synth_dataset(SynthDataset& dataset, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(fs::path(out_dir) / "images", ec);
    if (ec) fail("IoFailure", "cannot create '" + out_dir + "/images': " + ec.message());
    for (std::size_t i = 0; i < dataset.records.size(); ++i)
        save_image(dataset.images[i], (fs::path(out_dir) / dataset.records[i].path).string());
    write_manifest(Catalog(dataset.records), (fs::path(out_dir) / "manifest.jsonl").string());
}

std::string BenchResult::summary_text() const {
    std::ostringstream os;
    os.precision(6);
    os << "lab30 macro-F " << lab_report.macro_f << " micro-F " << lab_report.micro_f << '\n';
    os << "surfbow macro-F " << bow_report.macro_f << " micro-F " << bow_report.micro_f << '\n';
    os << "seed " << seed << '\n';
    return os.str();
}

BenchResult run_synth_bench(const BenchParams& params, std::uint64_t seed,
                            const std::string& out_dir) {
    namespace fs = std::filesystem;
    SynthDataset dataset = generate_synth_dataset(params.synth, seed);
    if (!out_dir.empty()) write_synth_dataset(dataset, out_dir);

    Catalog catalog(dataset.records);
    SplitAssignment split = make_splits(catalog, seed);
    std::map<std::string, std::string> all_labels;
    for (const auto& rec : dataset.records) all_labels[rec.photo_id] = rec.author_id;

    // Color features.
    FeatureMatrix lab_features("lab30", kLabHistogramDim);
    for (std::size_t i = 0; i < dataset.images.size(); ++i) {
        auto v = lab_histogram(dataset.images[i]);
        lab_features.add_row(dataset.records[i].photo_id,
                             std::vector<float>(v.begin(), v.end()));
    }

    // Local structure: SURF descriptors, vocabulary from non-test images.
    SurfParams surf_params;
    surf_params.max_keypoints = static_cast<int>(params.max_keypoints);
    std::vector<DescriptorSet> descriptor_sets;
    descriptor_sets.reserve(dataset.images.size());
    for (std::size_t i = 0; i < dataset.images.size(); ++i)
        descriptor_sets.push_back(
            extract_descriptors(dataset.images[i], surf_params));

    std::vector<float> pool;
    for (std::size_t i = 0; i < descriptor_sets.size(); ++i) {
        if (split.at(dataset.records[i].photo_id) == SplitSet::Test) continue;
        const auto& d = descriptor_sets[i].descriptors;
        pool.insert(pool.end(), d.begin(), d.end());
    }
    std::size_t n_pool = pool.size() / kSurfDescriptorDim;
    if (n_pool > params.max_vocab_descriptors) {
        std::vector<std::size_t> order(n_pool);
        for (std::size_t i = 0; i < n_pool; ++i) order[i] = i;
        Rng subsample_rng(derive_seed(seed, 7002));
        subsample_rng.shuffle(order);
        std::vector<float> sub;
        sub.reserve(params.max_vocab_descriptors * kSurfDescriptorDim);
        for (std::size_t i = 0; i < params.max_vocab_descriptors; ++i) {
            const float* row = pool.data() + order[i] * kSurfDescriptorDim;
            sub.insert(sub.end(), row, row + kSurfDescriptorDim);
        }
        pool = std::move(sub);
    }
    KMeansParams km;
    km.k = static_cast<std::uint32_t>(params.vocab_size);
    km.max_iterations = params.kmeans_iters;
    Vocabulary vocab = build_vocabulary(pool, kSurfDescriptorDim, km, derive_seed(seed, 7003));

    FeatureMatrix bow_features("surfbow" + std::to_string(params.vocab_size),
                               static_cast<std::uint32_t>(params.vocab_size));
    for (std::size_t i = 0; i < descriptor_sets.size(); ++i) {
        auto v = bow_encode(descriptor_sets[i].descriptors, kSurfDescriptorDim, vocab);
        bow_features.add_row(dataset.records[i].photo_id,
                             std::vector<float>(v.begin(), v.end()));
    }

    // Train on train+validation, evaluate on test.
    std::map<std::string, std::string> train_labels;
    for (const auto& rec : dataset.records)
        if (split.at(rec.photo_id) != SplitSet::Test) train_labels[rec.photo_id] = rec.author_id;
    std::vector<std::string> test_ids = split.ids_in(SplitSet::Test);

    SvmParams svm_params;
    svm_params.C = params.svm_c;
    LinearModel lab_model = train_ova_svm(lab_features, train_labels, svm_params, derive_seed(seed, 7004));
    LinearModel bow_model = train_ova_svm(bow_features, train_labels, svm_params, derive_seed(seed, 7005));

    BenchResult result;
    result.seed = seed;
    result.lab_report = evaluate(lab_model, lab_features, all_labels, test_ids);
    result.bow_report = evaluate(bow_model, bow_features, all_labels, test_ids);

    if (!out_dir.empty()) {
        write_split_file(split, (fs::path(out_dir) / "splits.tsv").string());
        write_feature_file(lab_features, (fs::path(out_dir) / "lab30.pfv").string());
        write_feature_file(bow_features, (fs::path(out_dir) / "surfbow.pfv").string());
        write_vocabulary(vocab, (fs::path(out_dir) / "vocab.pvoc").string());
        write_model(lab_model, (fs::path(out_dir) / "lab30.psvm").string());
        write_model(bow_model, (fs::path(out_dir) / "surfbow.psvm").string());
        std::ofstream report((fs::path(out_dir) / "report.txt").string());
        report << result.summary_text() << '\n'
               << "== lab30 ==\n" << result.lab_report.to_text() << '\n'
               << "== surfbow ==\n" << result.bow_report.to_text();
    }
    return result;
}

}  // namespace photoattr
