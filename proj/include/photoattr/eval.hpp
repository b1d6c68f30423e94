#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "photoattr/featstore.hpp"
#include "photoattr/svm.hpp"

namespace photoattr {

/// Per-class precision/recall/F1 plus the confusion matrix (rows = true
/// class, columns = predicted). F1 = 0 whenever TP = 0; macro-F averages F1
/// over every class in the label universe.
struct EvalReport {
    AuthorIndex classes;
    std::vector<std::vector<std::size_t>> confusion;  // classes x classes
    std::vector<double> precision;
    std::vector<double> recall;
    std::vector<double> f1;
    double macro_f = 0.0;
    double micro_f = 0.0;  // == accuracy for single-label multiclass

    std::string to_text() const;
};

/// Scores from a raw confusion matrix. Used by evaluate and directly by the
/// chance-baseline and formula tests.
EvalReport report_from_confusion(const AuthorIndex& classes,
                                 const std::vector<std::vector<std::size_t>>& confusion);

/// Runs the model over the test ids and scores it. Errors: EmptyTestSet,
/// MissingFeatureRow, UnknownAuthor (test label outside the model's classes).
EvalReport evaluate(const LinearModel& model, const FeatureMatrix& features,
                    const std::map<std::string, std::string>& labels,
                    const std::vector<std::string>& test_ids);

}  // namespace photoattr
