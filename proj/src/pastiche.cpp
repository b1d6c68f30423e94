#include "photoattr/pastiche.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "photoattr/errors.hpp"
#include "photoattr/rng.hpp"

namespace photoattr {

namespace {

std::size_t index_of(const std::vector<std::string>& vocab, const std::string& label,
                     const char* error_code) {
    auto it = std::find(vocab.begin(), vocab.end(), label);
    if (it == vocab.end()) fail(error_code, "label '" + label + "' is not in the vocabulary");
    return static_cast<std::size_t>(it - vocab.begin());
}

std::size_t sample_categorical(Rng& rng, const std::vector<double>& probs) {
    double u = rng.uniform();
    double cum = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        cum += probs[i];
        if (u < cum) return i;
    }
    return probs.size() - 1;
}

}  // namespace

std::vector<double> fit_scene_distribution(const std::map<std::string, std::string>& scene_of,
                                           const std::vector<std::string>& author_photos,
                                           const std::vector<std::string>& scenes, double alpha) {
    if (scenes.empty()) fail("EmptyVocabulary", "scene vocabulary is empty");
    if (alpha < 0.0) fail("BadAlpha", "smoothing alpha must be >= 0");
    std::vector<double> counts(scenes.size(), 0.0);
    std::size_t n = 0;
    for (const auto& photo : author_photos) {
        auto it = scene_of.find(photo);
        if (it == scene_of.end()) continue;
        counts[index_of(scenes, it->second, "UnknownScene")] += 1.0;
        ++n;
    }
    if (n == 0) fail("NoPredictions", "no scene predictions for this author's photos");
    double denom = static_cast<double>(n) + alpha * static_cast<double>(scenes.size());
    std::vector<double> dist(scenes.size(), 0.0);
    for (std::size_t s = 0; s < scenes.size(); ++s) dist[s] = (counts[s] + alpha) / denom;
    return dist;
}

std::vector<std::vector<double>> fit_object_given_scene(
    const std::vector<DetectionRecord>& detections,
    const std::map<std::string, std::string>& scene_of,
    const std::vector<std::string>& author_photos, const std::vector<std::string>& scenes,
    const std::vector<std::string>& objects, double alpha) {
    if (objects.empty()) fail("EmptyVocabulary", "object vocabulary is empty");
    if (alpha < 0.0) fail("BadAlpha", "smoothing alpha must be >= 0");
    const std::size_t cols = objects.size() + 1;  // final column: no object
    std::vector<std::vector<double>> counts(scenes.size(), std::vector<double>(cols, 0.0));

    std::set<std::string> author_set(author_photos.begin(), author_photos.end());
    std::map<std::string, std::size_t> photo_scene;  // photos of this author with a prediction
    for (const auto& photo : author_photos) {
        auto it = scene_of.find(photo);
        if (it == scene_of.end()) continue;
        std::size_t s = index_of(scenes, it->second, "UnknownScene");
        photo_scene[photo] = s;
        counts[s][objects.size()] += 1.0;  // one terminator event per photo
    }
    for (const auto& det : detections) {
        auto it = photo_scene.find(det.photo_id);
        if (it == photo_scene.end()) continue;  // other author or no scene prediction
        counts[it->second][index_of(objects, det.object_class, "UnknownObjectClass")] += 1.0;
    }

    std::vector<std::vector<double>> table(scenes.size(), std::vector<double>(cols, 0.0));
    for (std::size_t s = 0; s < scenes.size(); ++s) {
        double total = 0.0;
        for (double c : counts[s]) total += c;
        if (total == 0.0 && alpha == 0.0) {
            for (std::size_t k = 0; k < cols; ++k) table[s][k] = 1.0 / static_cast<double>(cols);
        } else {
            double denom = total + alpha * static_cast<double>(cols);
            for (std::size_t k = 0; k < cols; ++k) table[s][k] = (counts[s][k] + alpha) / denom;
        }
    }
    return table;
}

std::map<std::pair<std::size_t, std::size_t>, SpatialModel> fit_spatial_model(
    const std::vector<DetectionRecord>& detections,
    const std::map<std::string, std::string>& scene_of,
    const std::map<std::string, std::pair<std::uint32_t, std::uint32_t>>& photo_dims,
    const std::vector<std::string>& scenes, const std::vector<std::string>& objects, double alpha) {
    if (alpha < 0.0) fail("BadAlpha", "smoothing alpha must be >= 0");
    struct Acc {
        std::array<double, 64> cells{};
        double scale_sum = 0.0;
        std::size_t count = 0;
    };
    std::map<std::pair<std::size_t, std::size_t>, Acc> accs;

    for (const auto& det : detections) {
        auto sit = scene_of.find(det.photo_id);
        if (sit == scene_of.end()) continue;
        std::size_t s = index_of(scenes, sit->second, "UnknownScene");
        std::size_t o = index_of(objects, det.object_class, "UnknownObjectClass");
        auto dit = photo_dims.find(det.photo_id);
        if (dit == photo_dims.end())
            fail("MissingDims", "no width/height recorded for photo '" + det.photo_id + "'");
        double w = dit->second.first, h = dit->second.second;
        if (!(det.x0 < det.x1) || !(det.y0 < det.y1) || det.x0 < 0.0 || det.y0 < 0.0 ||
            det.x1 > w || det.y1 > h)
            fail("BboxOutOfBounds", "detection box on '" + det.photo_id + "' is degenerate or outside the photo");

        double cx = (det.x0 + det.x1) / 2.0 / w;
        double cy = (det.y0 + det.y1) / 2.0 / h;
        auto gx = std::min<std::size_t>(static_cast<std::size_t>(cx * kSpatialGridSide), kSpatialGridSide - 1);
        auto gy = std::min<std::size_t>(static_cast<std::size_t>(cy * kSpatialGridSide), kSpatialGridSide - 1);
        Acc& acc = accs[{s, o}];
        acc.cells[gy * kSpatialGridSide + gx] += 1.0;
        acc.scale_sum += (det.x1 - det.x0) * (det.y1 - det.y0) / (w * h);
        ++acc.count;
    }

    std::map<std::pair<std::size_t, std::size_t>, SpatialModel> out;
    for (const auto& [key, acc] : accs) {
        SpatialModel m;
        double denom = static_cast<double>(acc.count) + alpha * 64.0;
        for (std::size_t c = 0; c < 64; ++c) m.grid[c] = (acc.cells[c] + alpha) / denom;
        m.mean_scale = acc.scale_sum / static_cast<double>(acc.count);
        m.count = acc.count;
        out[key] = m;
    }
    return out;
}

SceneObjectModel fit_scene_object_model(
    const std::string& author_id, const std::vector<DetectionRecord>& detections,
    const std::map<std::string, std::string>& scene_of, const std::vector<std::string>& author_photos,
    const std::map<std::string, std::pair<std::uint32_t, std::uint32_t>>& photo_dims,
    const std::vector<std::string>& scenes, const std::vector<std::string>& objects, double alpha) {
    SceneObjectModel model;
    model.author_id = author_id;
    model.alpha = alpha;
    model.scenes = scenes;
    model.objects = objects;
    model.scene_dist = fit_scene_distribution(scene_of, author_photos, scenes, alpha);
    model.object_given_scene =
        fit_object_given_scene(detections, scene_of, author_photos, scenes, objects, alpha);
    model.spatial = fit_spatial_model(detections, scene_of, photo_dims, scenes, objects, alpha);

    double scale_sum = 0.0;
    std::size_t n = 0;
    for (const auto& [key, m] : model.spatial) {
        scale_sum += m.mean_scale * static_cast<double>(m.count);
        n += m.count;
    }
    if (n > 0) model.default_scale = scale_sum / static_cast<double>(n);
    return model;
}

SpatialModel SceneObjectModel::spatial_for(std::size_t scene, std::size_t object) const {
    auto it = spatial.find({scene, object});
    if (it != spatial.end()) return it->second;
    SpatialModel fallback;
    fallback.grid.fill(1.0 / 64.0);
    fallback.mean_scale = default_scale;
    return fallback;
}

PasticheRecipe sample_recipe(
    const SceneObjectModel& model,
    const std::map<std::string, std::vector<std::string>>& scene_backgrounds,
    const std::map<std::string, std::vector<DetectionRecord>>& detections_by_class,
    std::uint64_t seed, std::size_t max_objects) {
    if (model.scenes.empty() || model.scene_dist.size() != model.scenes.size())
        fail("EmptyModel", "scene/object model has no fitted scene distribution");

    Rng rng(seed);
    PasticheRecipe recipe;
    recipe.author_id = model.author_id;
    recipe.seed = seed;

    std::size_t scene_idx = sample_categorical(rng, model.scene_dist);
    recipe.scene = model.scenes[scene_idx];

    auto bit = scene_backgrounds.find(recipe.scene);
    if (bit == scene_backgrounds.end() || bit->second.empty())
        fail("NoBackgroundForScene", "no candidate background for scene '" + recipe.scene + "'");
    recipe.background_photo = bit->second[rng.below(bit->second.size())];

    const auto& row = model.object_given_scene.at(scene_idx);
    const std::size_t no_object = model.objects.size();
    std::size_t retries = 0;
    constexpr std::size_t kMaxRetries = 25;
    while (recipe.placements.size() < max_objects) {
        std::size_t k = sample_categorical(rng, row);
        if (k == no_object) break;
        const std::string& cls = model.objects[k];
        auto dit = detections_by_class.find(cls);
        if (dit == detections_by_class.end() || dit->second.empty()) {
            if (++retries > kMaxRetries)
                fail("RetriesExhausted", "sampled object class '" + cls + "' has no source detections");
            continue;
        }
        SpatialModel spatial = model.spatial_for(scene_idx, k);
        std::vector<double> grid(spatial.grid.begin(), spatial.grid.end());
        std::size_t cell = sample_categorical(rng, grid);
        std::size_t gy = cell / kSpatialGridSide, gx = cell % kSpatialGridSide;

        Placement pl;
        pl.object_class = cls;
        pl.detection_index = rng.below(dit->second.size());
        pl.source_photo = dit->second[pl.detection_index].photo_id;
        pl.center_x = (static_cast<double>(gx) + rng.uniform()) / kSpatialGridSide;
        pl.center_y = (static_cast<double>(gy) + rng.uniform()) / kSpatialGridSide;
        pl.scale = std::max(spatial.mean_scale, 1e-4);
        recipe.placements.push_back(pl);
    }
    return recipe;
}

namespace {

Image resize_nearest(const Image& src, int nw, int nh) {
    Image out = make_image(nw, nh, src.channels);
    for (int y = 0; y < nh; ++y) {
        int sy = std::min(static_cast<int>((y + 0.5) * src.height / nh), src.height - 1);
        for (int x = 0; x < nw; ++x) {
            int sx = std::min(static_cast<int>((x + 0.5) * src.width / nw), src.width - 1);
            for (int c = 0; c < src.channels; ++c) out.at(x, y, c) = src.at(sx, sy, c);
        }
    }
    return out;
}

Image match_channels(const Image& src, int channels) {
    if (src.channels == channels) return src;
    Image out = make_image(src.width, src.height, channels);
    for (int y = 0; y < src.height; ++y)
        for (int x = 0; x < src.width; ++x) {
            if (channels == 1) {
                double luma = 0.299 * src.at(x, y, 0) + 0.587 * src.at(x, y, 1) +
                              0.114 * src.at(x, y, 2);
                out.at(x, y, 0) = static_cast<std::uint8_t>(std::lround(luma));
            } else {
                for (int c = 0; c < 3; ++c) out.at(x, y, c) = src.at(x, y, 0);
            }
        }
    return out;
}

}  // namespace

Image compose_pastiche(const PasticheRecipe& recipe, const Image& background,
                       const std::vector<std::pair<Image, Image>>& crops) {
    if (crops.size() != recipe.placements.size())
        fail("MissingCrop", "recipe has " + std::to_string(recipe.placements.size()) +
                                " placements but " + std::to_string(crops.size()) + " crops supplied");
    Image out = background;
    const double bg_w = background.width, bg_h = background.height;
    for (std::size_t i = 0; i < recipe.placements.size(); ++i) {
        const Placement& pl = recipe.placements[i];
        const Image& crop = crops[i].first;
        const Image& mask = crops[i].second;
        if (mask.width != crop.width || mask.height != crop.height || mask.channels != 1)
            fail("MaskShapeMismatch", "mask for placement " + std::to_string(i) +
                                          " does not match its crop (or is not single-channel)");

        // Linear scale factor for the target area fraction, capped in-frame.
        double f = std::sqrt(pl.scale * bg_w * bg_h /
                             (static_cast<double>(crop.width) * crop.height));
        f = std::min({f, bg_w / crop.width, bg_h / crop.height});
        int nw = static_cast<int>(std::max(1.0, std::round(crop.width * f)));
        int nh = static_cast<int>(std::max(1.0, std::round(crop.height * f)));
        nw = std::min(nw, background.width);
        nh = std::min(nh, background.height);

        Image scaled = resize_bilinear(match_channels(crop, background.channels), nw, nh);
        Image scaled_mask = resize_nearest(mask, nw, nh);

        int left = static_cast<int>(std::round(pl.center_x * bg_w - nw / 2.0));
        int top = static_cast<int>(std::round(pl.center_y * bg_h - nh / 2.0));
        left = std::clamp(left, 0, background.width - nw);
        top = std::clamp(top, 0, background.height - nh);

        for (int y = 0; y < nh; ++y)
            for (int x = 0; x < nw; ++x) {
                if (scaled_mask.at(x, y, 0) == 0) continue;
                for (int c = 0; c < background.channels; ++c)
                    out.at(left + x, top + y, c) = scaled.at(x, y, c);
            }
    }
    return out;
}

std::string SceneObjectModel::to_json() const {
    nlohmann::json j;
    j["author_id"] = author_id;
    j["alpha"] = alpha;
    j["scenes"] = scenes;
    j["objects"] = objects;
    j["scene_dist"] = scene_dist;
    j["object_given_scene"] = object_given_scene;
    j["default_scale"] = default_scale;
    nlohmann::json sp = nlohmann::json::array();
    for (const auto& [key, m] : spatial) {
        nlohmann::json e;
        e["scene"] = key.first;
        e["object"] = key.second;
        e["grid"] = m.grid;
        e["mean_scale"] = m.mean_scale;
        e["count"] = m.count;
        sp.push_back(e);
    }
    j["spatial"] = sp;
    return j.dump(2) + "\n";
}

SceneObjectModel SceneObjectModel::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail("MalformedModel", std::string("cannot parse scene/object model: ") + e.what());
    }
    SceneObjectModel m;
    try {
        m.author_id = j.at("author_id").get<std::string>();
        m.alpha = j.at("alpha").get<double>();
        m.scenes = j.at("scenes").get<std::vector<std::string>>();
        m.objects = j.at("objects").get<std::vector<std::string>>();
        m.scene_dist = j.at("scene_dist").get<std::vector<double>>();
        m.object_given_scene = j.at("object_given_scene").get<std::vector<std::vector<double>>>();
        m.default_scale = j.at("default_scale").get<double>();
        for (const auto& e : j.at("spatial")) {
            SpatialModel sm;
            auto grid = e.at("grid").get<std::vector<double>>();
            if (grid.size() != 64) fail("MalformedModel", "spatial grid must have 64 cells");
            std::copy(grid.begin(), grid.end(), sm.grid.begin());
            sm.mean_scale = e.at("mean_scale").get<double>();
            sm.count = e.at("count").get<std::size_t>();
            m.spatial[{e.at("scene").get<std::size_t>(), e.at("object").get<std::size_t>()}] = sm;
        }
    } catch (const nlohmann::json::exception& e) {
        fail("MalformedModel", std::string("scene/object model is missing fields: ") + e.what());
    }
    if (m.scene_dist.size() != m.scenes.size() ||
        m.object_given_scene.size() != m.scenes.size())
        fail("MalformedModel", "scene/object model table sizes disagree with vocabularies");
    return m;
}

std::string PasticheRecipe::to_json() const {
    nlohmann::json j;
    j["author_id"] = author_id;
    j["scene"] = scene;
    j["background_photo"] = background_photo;
    j["seed"] = seed;
    nlohmann::json pls = nlohmann::json::array();
    for (const auto& pl : placements) {
        nlohmann::json e;
        e["object_class"] = pl.object_class;
        e["detection_index"] = pl.detection_index;
        e["source_photo"] = pl.source_photo;
        e["center_x"] = pl.center_x;
        e["center_y"] = pl.center_y;
        e["scale"] = pl.scale;
        pls.push_back(e);
    }
    j["placements"] = pls;
    return j.dump(2) + "\n";
}

PasticheRecipe PasticheRecipe::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail("MalformedRecipe", std::string("cannot parse recipe: ") + e.what());
    }
    PasticheRecipe r;
    try {
        r.author_id = j.at("author_id").get<std::string>();
        r.scene = j.at("scene").get<std::string>();
        r.background_photo = j.at("background_photo").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& e : j.at("placements")) {
            Placement pl;
            pl.object_class = e.at("object_class").get<std::string>();
            pl.detection_index = e.at("detection_index").get<std::size_t>();
            pl.source_photo = e.at("source_photo").get<std::string>();
            pl.center_x = e.at("center_x").get<double>();
            pl.center_y = e.at("center_y").get<double>();
            pl.scale = e.at("scale").get<double>();
            r.placements.push_back(pl);
        }
    } catch (const nlohmann::json::exception& e) {
        fail("MalformedRecipe", std::string("recipe is missing fields: ") + e.what());
    }
    return r;
}

std::map<std::string, std::string> load_scene_predictions(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("IoFailure", "cannot open scene predictions '" + path + "'");
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
            fail("MalformedLine", "scene predictions line " + std::to_string(lineno) +
                                      ": expected photo_id<TAB>scene");
        out[line.substr(0, tab)] = line.substr(tab + 1);
    }
    return out;
}

std::vector<DetectionRecord> load_detections(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("IoFailure", "cannot open detections '" + path + "'");
    std::vector<DetectionRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            auto tab = line.find('\t', start);
            fields.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (fields.size() < 4 || fields.size() > 5)
            fail("MalformedLine", "detections line " + std::to_string(lineno) +
                                      ": expected photo<TAB>class<TAB>x0,y0,x1,y1<TAB>score[<TAB>mask]");
        DetectionRecord det;
        det.photo_id = fields[0];
        det.object_class = fields[1];
        std::vector<double> box;
        std::stringstream bs(fields[2]);
        std::string part;
        while (std::getline(bs, part, ',')) {
            try {
                box.push_back(std::stod(part));
            } catch (const std::exception&) {
                fail("MalformedLine", "detections line " + std::to_string(lineno) + ": bad box number");
            }
        }
        if (box.size() != 4)
            fail("MalformedLine", "detections line " + std::to_string(lineno) +
                                      ": box must be x0,y0,x1,y1");
        det.x0 = box[0];
        det.y0 = box[1];
        det.x1 = box[2];
        det.y1 = box[3];
        try {
            det.score = std::stod(fields[3]);
        } catch (const std::exception&) {
            fail("MalformedLine", "detections line " + std::to_string(lineno) + ": bad score");
        }
        if (fields.size() > 4 && fields[4] != "-") det.mask_path = fields[4];
        out.push_back(det);
    }
    return out;
}

std::vector<std::string> load_label_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("IoFailure", "cannot open label list '" + path + "'");
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        out.push_back(line);
    }
    if (out.empty()) fail("EmptyList", "label list '" + path + "' has no entries");
    return out;
}

}  // namespace photoattr
