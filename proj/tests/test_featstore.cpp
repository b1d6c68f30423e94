#include <doctest.h>

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "photoattr/errors.hpp"
#include "photoattr/featstore.hpp"
#include "photoattr/rng.hpp"
#include "test_util.hpp"

using namespace photoattr;

namespace {

std::string read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

// Independent size oracle straight from the format definition.
std::size_t expected_file_size(const FeatureMatrix& m) {
    std::size_t size = 4 + 4 + 4;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        size += 4 + m.id_at(r).size() + 4ull * m.dimension();
    }
    return size;
}

FeatureMatrix random_matrix(Rng& rng, std::uint32_t dim, std::size_t rows) {
    FeatureMatrix m("feat" + std::to_string(dim), dim);
    for (std::size_t r = 0; r < rows; ++r) {
        std::string id = "photo_" + std::to_string(rng.below(1000000)) + "_" + std::to_string(r);
        m.add_row(id, testutil::random_floats(rng, dim, -100.0f, 100.0f));
    }
    return m;
}

bool bit_identical(const FeatureMatrix& a, const FeatureMatrix& b) {
    if (a.dimension() != b.dimension() || a.rows() != b.rows()) return false;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        if (a.id_at(r) != b.id_at(r)) return false;
        const auto& ra = a.row_at(r);
        const auto& rb = b.row_at(r);
        if (std::memcmp(ra.data(), rb.data(), ra.size() * sizeof(float)) != 0) return false;
    }
    return true;
}

}  // namespace

TEST_SUITE("featstore") {

TEST_CASE("matrix rejects bad rows") {
    FeatureMatrix m("f", 3);
    m.add_row("a", {1.0f, 2.0f, 3.0f});
    try {
        m.add_row("b", {1.0f});
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == "DimensionMismatch");
    }
    try {
        m.add_row("a", {4.0f, 5.0f, 6.0f});
        FAIL("expected DuplicatePhotoId");
    } catch (const Error& e) {
        CHECK(e.code() == "DuplicatePhotoId");
    }
    try {
        m.row("zzz");
        FAIL("expected MissingFeatureRow");
    } catch (const Error& e) {
        CHECK(e.code() == "MissingFeatureRow");
    }
}

TEST_CASE("one-row dim-2 file is exactly 25 bytes with the documented layout") {
    testutil::ScratchDir dir("featstore_layout");
    FeatureMatrix m("toy", 2);
    m.add_row("a", {1.0f, 2.0f});
    const std::string path = dir.file("toy.pfv");
    write_feature_file(m, path);

    // 4 magic + 4 dim + 4 rows + 4 id-length + 1 id byte + 8 floats = 25.
    CHECK(std::filesystem::file_size(path) == 25);

    const std::string bytes = read_bytes(path);
    REQUIRE(bytes.size() == 25);
    CHECK(bytes.substr(0, 4) == "PFV1");
    auto u32_at = [&](std::size_t off) {
        return static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off])) |
               static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + 1])) << 8 |
               static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + 2])) << 16 |
               static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + 3])) << 24;
    };
    CHECK(u32_at(4) == 2);    // dimension
    CHECK(u32_at(8) == 1);    // row count
    CHECK(u32_at(12) == 1);   // id length
    CHECK(bytes[16] == 'a');
    CHECK(u32_at(17) == std::bit_cast<std::uint32_t>(1.0f));
    CHECK(u32_at(21) == std::bit_cast<std::uint32_t>(2.0f));
}

TEST_CASE("file size always matches the format arithmetic") {
    testutil::ScratchDir dir("featstore_size");
    Rng rng(404);
    for (int trial = 0; trial < 20; ++trial) {
        const auto dim = static_cast<std::uint32_t>(1 + rng.below(64));
        FeatureMatrix m = random_matrix(rng, dim, rng.below(12));
        const std::string path = dir.file("m" + std::to_string(trial) + ".pfv");
        write_feature_file(m, path);
        CHECK(std::filesystem::file_size(path) == expected_file_size(m));
    }
}

TEST_CASE("write then read is bit-exact on 50 random matrices") {
    testutil::ScratchDir dir("featstore_roundtrip");
    Rng rng(777);
    for (int trial = 0; trial < 50; ++trial) {
        std::uint32_t dim;
        std::size_t rows;
        if (trial == 0) {
            dim = 7;   // header-only: rows absent entirely
            rows = 0;
        } else if (trial == 1) {
            dim = 4096;  // the wide CNN-layer shape
            rows = 3;
        } else {
            dim = static_cast<std::uint32_t>(1 + rng.below(128));
            rows = 1 + rng.below(20);
        }
        FeatureMatrix m = random_matrix(rng, dim, rows);
        const std::string path = dir.file("rt" + std::to_string(trial) + ".pfv");
        write_feature_file(m, path);
        FeatureMatrix back = read_feature_file(path);
        REQUIRE(bit_identical(m, back));

        // Rewriting the reread matrix reproduces the bytes exactly.
        const std::string path2 = dir.file("rt" + std::to_string(trial) + "b.pfv");
        write_feature_file(back, path2);
        REQUIRE(read_bytes(path) == read_bytes(path2));
    }
}

TEST_CASE("expected dimension is enforced") {
    testutil::ScratchDir dir("featstore_dim");
    Rng rng(5);
    FeatureMatrix m = random_matrix(rng, 1000, 2);
    const std::string path = dir.file("dim1000.pfv");
    write_feature_file(m, path);
    CHECK(read_feature_file(path, 1000).dimension() == 1000);
    try {
        read_feature_file(path, 1183);
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == "DimensionMismatch");
    }
}

TEST_CASE("non-PFV1 bytes are rejected") {
    testutil::ScratchDir dir("featstore_magic");
    {
        std::ofstream out(dir.file("bad.pfv"), std::ios::binary);
        out << "JUNKJUNKJUNKJUNK";
    }
    try {
        read_feature_file(dir.file("bad.pfv"));
        FAIL("expected BadMagic");
    } catch (const Error& e) {
        CHECK(e.code() == "BadMagic");
    }
}

TEST_CASE("truncated files are rejected with the row index") {
    testutil::ScratchDir dir("featstore_trunc");
    Rng rng(6);
    FeatureMatrix m = random_matrix(rng, 8, 5);
    const std::string full_path = dir.file("full.pfv");
    write_feature_file(m, full_path);
    const std::string bytes = read_bytes(full_path);

    // Cut inside row 2: header 12 + two full rows + a few bytes into the third.
    std::size_t offset = 12;
    for (int r = 0; r < 2; ++r) offset += 4 + m.id_at(r).size() + 4 * 8;
    const std::string cut = bytes.substr(0, offset + 5);
    const std::string cut_path = dir.file("cut.pfv");
    {
        std::ofstream out(cut_path, std::ios::binary);
        out.write(cut.data(), static_cast<std::streamsize>(cut.size()));
    }
    try {
        read_feature_file(cut_path);
        FAIL("expected TruncatedFile");
    } catch (const Error& e) {
        CHECK(e.code() == "TruncatedFile");
        CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }
}

TEST_CASE("non-finite values are rejected at write time") {
    testutil::ScratchDir dir("featstore_nan");
    FeatureMatrix m("f", 2);
    m.add_row("ok", {1.0f, 2.0f});
    m.add_row("bad", {std::numeric_limits<float>::quiet_NaN(), 0.0f});
    try {
        write_feature_file(m, dir.file("nan.pfv"));
        FAIL("expected NonFiniteValue");
    } catch (const Error& e) {
        CHECK(e.code() == "NonFiniteValue");
        CHECK(std::string(e.what()).find("bad") != std::string::npos);
    }
}

TEST_CASE("TOP rule picks the argmax author") {
    AuthorIndex index;
    for (int i = 0; i < 10; ++i) index.author_ids.push_back("author" + std::to_string(i));

    std::vector<float> row(10, 0.0f);
    row[7] = 3.5f;
    CHECK(top_rule_classify(row, index) == "author7");

    std::vector<float> flat(10, 1.25f);
    CHECK(top_rule_classify(flat, index) == "author0");

    try {
        top_rule_classify(std::vector<float>(9, 0.0f), index);
        FAIL("expected LengthMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == "LengthMismatch");
    }
}

TEST_CASE("TOP rule matches a linear-scan oracle on 1000 random 41-d rows") {
    AuthorIndex index;
    for (int i = 0; i < 41; ++i) index.author_ids.push_back("photog" + std::to_string(i));
    Rng rng(41);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<float> row = testutil::random_floats(rng, 41, -10.0f, 10.0f);
        // Oracle: first index attaining the maximum, found by plain scan.
        std::size_t best = 0;
        for (std::size_t i = 1; i < row.size(); ++i) {
            if (row[i] > row[best]) best = i;
        }
        REQUIRE(top_rule_classify(row, index) == index.at(best));

        // Argmax is invariant to adding a constant to every dimension.
        std::vector<float> shifted = row;
        for (auto& v : shifted) v += 2.5f;
        REQUIRE(top_rule_classify(shifted, index) == index.at(best));
    }
}

}  // TEST_SUITE
