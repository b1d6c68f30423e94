#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "photoattr/image.hpp"

namespace photoattr {

/// One detected object segment on a photo. Box coordinates are pixels with
/// x0 < x1, y0 < y1 inside the photo bounds.
struct DetectionRecord {
    std::string photo_id;
    std::string object_class;
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
    double score = 0.0;
    std::string mask_path;  // optional binary mask, same size as the box crop
};

/// Placement statistics for one (scene, object) pair: a smoothed 8x8 grid of
/// normalized-center probabilities plus the mean box-area fraction.
struct SpatialModel {
    std::array<double, 64> grid{};
    double mean_scale = 0.0;
    std::size_t count = 0;
};

constexpr std::size_t kSpatialGridSide = 8;

struct SceneObjectModel {
    std::string author_id;
    double alpha = 1.0;
    std::vector<std::string> scenes;
    std::vector<std::string> objects;  // object-given-scene rows carry one
                                       // extra final column: "no object"
    std::vector<double> scene_dist;
    std::vector<std::vector<double>> object_given_scene;
    std::map<std::pair<std::size_t, std::size_t>, SpatialModel> spatial;
    double default_scale = 0.05;  // used when a sampled pair has no detections

    /// Fitted model for the pair, or a uniform-grid fallback at default_scale.
    SpatialModel spatial_for(std::size_t scene, std::size_t object) const;
    std::string to_json() const;
    static SceneObjectModel from_json(const std::string& text);
};

/// Laplace-smoothed categorical over the scene vocabulary, fitted to the
/// author's per-photo scene predictions. Errors: NoPredictions, UnknownScene.
std::vector<double> fit_scene_distribution(const std::map<std::string, std::string>& scene_of,
                                           const std::vector<std::string>& author_photos,
                                           const std::vector<std::string>& scenes, double alpha);

/// Per-scene categorical over object classes plus a final no-object column
/// (one no-object event per photo so the sampler can terminate). Scenes with
/// no photos get the uniform row. Errors: UnknownScene, UnknownObjectClass.
std::vector<std::vector<double>> fit_object_given_scene(
    const std::vector<DetectionRecord>& detections,
    const std::map<std::string, std::string>& scene_of,
    const std::vector<std::string>& author_photos, const std::vector<std::string>& scenes,
    const std::vector<std::string>& objects, double alpha);

/// 8x8 grid of detection centers (normalized by photo size) and mean relative
/// box area, per (scene, object) pair that has detections.
/// Errors: BboxOutOfBounds, MissingDims, UnknownScene, UnknownObjectClass.
std::map<std::pair<std::size_t, std::size_t>, SpatialModel> fit_spatial_model(
    const std::vector<DetectionRecord>& detections,
    const std::map<std::string, std::string>& scene_of,
    const std::map<std::string, std::pair<std::uint32_t, std::uint32_t>>& photo_dims,
    const std::vector<std::string>& scenes, const std::vector<std::string>& objects, double alpha);

SceneObjectModel fit_scene_object_model(
    const std::string& author_id, const std::vector<DetectionRecord>& detections,
    const std::map<std::string, std::string>& scene_of, const std::vector<std::string>& author_photos,
    const std::map<std::string, std::pair<std::uint32_t, std::uint32_t>>& photo_dims,
    const std::vector<std::string>& scenes, const std::vector<std::string>& objects, double alpha);

struct Placement {
    std::string object_class;
    std::size_t detection_index = 0;  // into the class's detection list
    std::string source_photo;
    double center_x = 0.0;  // normalized [0,1)
    double center_y = 0.0;
    double scale = 0.0;  // target box-area fraction
};

struct PasticheRecipe {
    std::string author_id;
    std::string scene;
    std::string background_photo;
    std::vector<Placement> placements;
    std::uint64_t seed = 0;

    std::string to_json() const;
    static PasticheRecipe from_json(const std::string& text);
};

/// Draws scene, background, and up to max_objects placements from the model.
/// Errors: NoBackgroundForScene, RetriesExhausted (sampled object class has
/// no detections after bounded resampling), EmptyModel.
PasticheRecipe sample_recipe(
    const SceneObjectModel& model,
    const std::map<std::string, std::vector<std::string>>& scene_backgrounds,
    const std::map<std::string, std::vector<DetectionRecord>>& detections_by_class,
    std::uint64_t seed, std::size_t max_objects = 5);

/// Pastes crops[i] (segment image + same-size mask) for placements[i] onto
/// the background: scaled to the placement's area fraction, centered at its
/// cell (clamped in-frame), copied only where the mask is nonzero. Later
/// placements draw over earlier ones. Errors: MissingCrop, MaskShapeMismatch.
Image compose_pastiche(const PasticheRecipe& recipe, const Image& background,
                       const std::vector<std::pair<Image, Image>>& crops);

/// Parsers. Scene predictions: `photo_id<TAB>scene` per line. Detections:
/// `photo_id<TAB>class<TAB>x0,y0,x1,y1<TAB>score[<TAB>mask_path]`.
std::map<std::string, std::string> load_scene_predictions(const std::string& path);
std::vector<DetectionRecord> load_detections(const std::string& path);
std::vector<std::string> load_label_list(const std::string& path);

}  // namespace photoattr
