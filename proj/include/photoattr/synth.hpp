#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "photoattr/catalog.hpp"
#include "photoattr/eval.hpp"
#include "photoattr/image.hpp"
#include "photoattr/kmeans.hpp"

namespace photoattr {

/// Desk-scale synthetic photographer corpus: each author renders one texture
/// family (stripes, checkers, dots, rings) in a fixed two-color palette with
/// per-image jitter, so both color statistics and local structure carry the
/// author signal.
struct SynthParams {
    std::size_t authors = 8;          // 2..8 (each gets a distinct style)
    std::size_t images_per_author = 200;
    int width = 96;
    int height = 96;
};

struct SynthDataset {
    std::vector<PhotoRecord> records;  // photo_id, author_id, path filled
    std::vector<Image> images;         // parallel to records
};

/// Deterministic in (params, seed). Errors: BadParams.
SynthDataset generate_synth_dataset(const SynthParams& params, std::uint64_t seed);

/// Writes images (PPM) plus manifest.jsonl into out_dir; record paths point
/// at the written files.
void write_synth_dataset(SynthDataset& dataset, const std::string& out_dir);

struct BenchParams {
    SynthParams synth;
    std::size_t vocab_size = 500;
    std::size_t max_keypoints = 30;      // SURF keypoints kept per image
    std::size_t max_vocab_descriptors = 8000;  // subsample for k-means
    std::uint32_t kmeans_iters = 25;
    double svm_c = 1.0;
};

struct BenchResult {
    EvalReport lab_report;
    EvalReport bow_report;
    std::uint64_t seed = 0;

    std::string summary_text() const;
};

/// Full pipeline: generate -> lab30 + surfbow features -> split -> train
/// one-vs-all SVMs -> evaluate on the held-out test split. When out_dir is
/// nonempty the dataset and intermediate artifacts are written there.
BenchResult run_synth_bench(const BenchParams& params, std::uint64_t seed,
                            const std::string& out_dir);

}  // namespace photoattr
