#include <gtest/gtest.h>

#include <filesystem>

#include "support.hpp"
#include "suotbary/error.hpp"
#include "suotbary/io.hpp"

namespace suotbary {
namespace {

namespace fs = std::filesystem;

TEST(Io, MatrixRoundTrip) {
  const SpdMatrix s = testing::random_spd(3, 1);
  EXPECT_EQ(spd_from_json(matrix_to_json(s.sym())).mat(), s.mat());
  EXPECT_EQ(matrix_to_json(SymMatrix::identity(2)), R"({"d":2,"data":[1.0,0.0,0.0,1.0]})");
}

TEST(Io, MeasureRoundTrip) {
  const GaussianMeasure g(1.5, Eigen::Vector2d(0.25, -1.0), testing::random_spd(2, 2));
  const GaussianMeasure back = measure_from_json(measure_to_json(g));
  EXPECT_EQ(back.mass, g.mass);
  EXPECT_EQ(back.mean, g.mean);
  EXPECT_EQ(back.cov.mat(), g.cov.mat());
}

TEST(Io, RejectsBadDocuments) {
  EXPECT_THROW(sym_from_json(R"({"d":2,"data":[1,0.1,0,1]})"), Error);
  EXPECT_NO_THROW(sym_from_json(R"({"d":2,"data":[1,1e-10,0,1]})"));
  EXPECT_THROW(sym_from_json(R"({"d":2,"data":[1,0,0]})"), Error);
  EXPECT_THROW(sym_from_json(R"({"data":[1]})"), Error);
  EXPECT_THROW(sym_from_json("{not json"), Error);
  EXPECT_THROW(spd_from_json(R"({"d":1,"data":[-1]})"), Error);
  EXPECT_THROW(measure_from_json(R"({"mass":1,"cov":{"d":1,"data":[1]}})"), Error);
  EXPECT_THROW(measure_from_json(R"({"mass":-1,"mean":[0],"cov":{"d":1,"data":[1]}})"), Error);
}

TEST(Io, Files) {
  const fs::path dir = fs::temp_directory_path() / "suotbary_io_test";
  fs::remove_all(dir);
  const GaussianMeasure g = GaussianMeasure::centered(testing::random_spd(2, 3));
  save_measure(dir / "nested" / "m.json", g);
  EXPECT_EQ(load_measure(dir / "nested" / "m.json").cov.mat(), g.cov.mat());
  save_matrix(dir / "c.json", g.cov.sym());
  EXPECT_EQ(load_spd(dir / "c.json").mat(), g.cov.mat());
  try {
    load_measure(dir / "missing.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
    EXPECT_NE(std::string(e.what()).find("missing.json"), std::string::npos);
  }
  fs::remove_all(dir);
}

}  // namespace
}  // namespace suotbary
