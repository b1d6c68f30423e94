#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "photoattr/featstore.hpp"

namespace photoattr {

struct SvmParams {
    double C = 1.0;
    double tolerance = 0.1;
    std::uint32_t max_epochs = 1000;
};

/// One-vs-all linear model: one weight vector and bias per class. The bias is
/// learned through an appended constant-1 feature.
struct LinearModel {
    AuthorIndex classes;
    std::uint32_t dim = 0;  // feature dimension, bias excluded
    std::vector<std::vector<double>> weights;  // classes x dim
    std::vector<double> biases;
    SvmParams params;
    std::string feature_name;
    std::uint64_t seed = 0;
    // per class: dual objective after each epoch (non-decreasing)
    std::vector<std::vector<double>> dual_trace;

    double dual_objective(std::size_t class_index) const {
        return dual_trace[class_index].back();
    }
};

/// L2-regularized L1-loss SVM solved in the dual by coordinate descent over
/// seeded random permutations, one binary problem per class. An epoch's
/// projected-gradient gap below tolerance terminates that class's problem.
/// Errors: SingleClass, MissingFeatureRow, NonPositiveC.
LinearModel train_ova_svm(const FeatureMatrix& features,
                          const std::map<std::string, std::string>& labels,
                          const SvmParams& params, std::uint64_t seed);

std::vector<double> decision_values(const LinearModel& model, const std::vector<float>& x);

/// Class with maximal decision value; ties go to the lowest class index.
std::string predict(const LinearModel& model, const std::vector<float>& x);

/// PSVM file: magic "PSVM", u32 dim, u32 classes, author table (u32 length +
/// bytes each), then per class dim f64 weights followed by one f64 bias.
/// Hyperparameters and metadata are training-time only and not persisted.
void write_model(const LinearModel& model, const std::string& path);
LinearModel read_model(const std::string& path);

struct ExplainResult {
    std::string nearest_in_predicted;
    double distance_predicted = 0.0;
    std::string nearest_in_true;
    double distance_true = 0.0;
};

/// Finds, under the |w|-weighted squared distance of each class, the nearest
/// training image in the predicted class and in the true class.
/// Errors: EmptyClass.
ExplainResult weighted_nn_explain(const LinearModel& model, const FeatureMatrix& features,
                                  const std::map<std::string, std::string>& labels,
                                  const std::vector<std::string>& train_ids,
                                  const std::string& test_id, const std::string& predicted_class,
                                  const std::string& true_class);

}  // namespace photoattr
