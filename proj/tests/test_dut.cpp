/*
 * Copyright 2026 The sdfmeas Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "sdfmeas/dut.hpp"

namespace sdfmeas {
namespace {

const std::filesystem::path kData = SDFMEAS_DATA_DIR;

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << body;
  return p;
}

TEST(Dut, BundledSobelLoads) {
  auto d = load_dut(kData / "sobel_quad.xml");
  EXPECT_TRUE(validate_dut(d).ok());
  ASSERT_EQ(d.graphs.size(), 1u);
  EXPECT_EQ(d.graphs[0].actors.size(), 4u);
  EXPECT_EQ(d.platform.tiles.size(), 4u);
  ASSERT_NE(d.find_mapping("fig1"), nullptr);
  EXPECT_EQ(d.find_mapping("fig1")->actor_to_tile.at("GX"), "P2");
  EXPECT_EQ(d.granularity, Granularity::Phase);
}

TEST(Dut, JsonEquivalentOfXml) {
  EXPECT_EQ(load_dut(kData / "sobel_quad.xml"), load_dut(kData / "sobel_quad.json"));
}

TEST(Dut, RoundTripBothFormats) {
  for (const char* f : {"sobel_quad.xml", "sobel_jpeg_explore.xml"}) {
    auto d = load_dut(kData / f);
    EXPECT_EQ(parse_dut_json(dut_to_json(d)), d) << f;
    EXPECT_EQ(parse_dut_xml(dut_to_xml(d)), d) << f;
  }
}

TEST(Dut, SaveAndReload) {
  auto d = load_dut(kData / "sobel_jpeg_explore.xml");
  const auto dir = std::filesystem::temp_directory_path();
  for (const char* name : {"sdfmeas_dut_rt.xml", "sdfmeas_dut_rt.json"}) {
    save_dut(dir / name, d);
    EXPECT_EQ(load_dut(dir / name), d);
    std::filesystem::remove(dir / name);
  }
}

TEST(Dut, ExploreHasSevenMappings) {
  auto d = load_dut(kData / "sobel_jpeg_explore.xml");
  EXPECT_EQ(d.mappings.size(), 7u);
  EXPECT_EQ(d.graphs.size(), 2u);
  EXPECT_EQ(d.granularity, Granularity::Sdfg);
}

TEST(Dut, MissingActorReference) {
  auto d = load_dut(kData / "sobel_quad.xml");
  d.mappings[0].actor_to_tile["ghost"] = "P1";
  d.mappings[0].schedules[0].order.push_back("ghost");
  EXPECT_FALSE(validate_dut(d).ok());
  auto path = temp_file("sdfmeas_bad_ref.xml", dut_to_xml(d));
  EXPECT_THROW(load_dut(path), ValidationError);
  std::filesystem::remove(path);
}

TEST(Dut, Defaults) {
  auto d = parse_dut_json(R"({"graphs":[{"id":"g","actors":[{"id":"A","cycles":5}]}],
                              "mappings":[{"id":"m","places":[{"actor":"A","tile":"P1"}]}]})");
  EXPECT_EQ(d.platform, quad_core_platform());
  EXPECT_EQ(d.repetitions, 10);
  EXPECT_EQ(d.seed, 1u);
  EXPECT_EQ(d.control_cost, 2);
  ASSERT_EQ(d.mappings[0].schedules.size(), 1u);
  EXPECT_EQ(d.mappings[0].schedules[0].tile_id, "P1");
  EXPECT_TRUE(validate_dut(d).ok()) << validate_dut(d).to_string();
}

TEST(Dut, Errors) {
  EXPECT_THROW(load_dut(kData / "does_not_exist.xml"), IoError);
  auto txt = temp_file("sdfmeas_dut.txt", "{}");
  EXPECT_THROW(load_dut(txt), ParseError);
  std::filesystem::remove(txt);
  EXPECT_THROW(parse_dut_json("{\"graphs\": ["), ParseError);
  EXPECT_THROW(parse_dut_xml("<dut><graph id='g'>"), ParseError);
  EXPECT_THROW(parse_dut_xml("<system/>"), ParseError);
  try {
    parse_dut_xml("<dut><graph id='g' colour='red'/></dut>");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("colour"), std::string::npos);
  }
  EXPECT_THROW(parse_dut_xml("<dut><graph id='g'><actor id='A' cycles='lots'/></graph></dut>"), ParseError);
}

}  // namespace
}  // namespace sdfmeas
