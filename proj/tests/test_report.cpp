#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "noael/builtin_data.hpp"
#include "noael/csv.hpp"
#include "noael/report.hpp"
#include "noael/sha256.hpp"
#include "noael/svg_plot.hpp"

using namespace noael;

namespace {

ReportDocument wes_report() {
    ReportDocument doc;
    doc.dataset_id = "wes";
    doc.config.method = Method::ctp_pairwise;
    doc.config.direction = Direction::less;
    doc.analysis = run_analysis(DoseResponseDataset{builtin::wes()}, doc.config);
    return doc;
}

}  // namespace

TEST_CASE("report JSON has the report-v1 shape") {
    auto doc = wes_report();
    nlohmann::json j = to_json(doc);
    CHECK(j["schema"] == "report-v1");
    CHECK(j["metadata"]["dataset"] == "wes");
    CHECK(j["metadata"]["method"] == "ctp-pairwise");
    REQUIRE(j["rows"].size() == 4);
    CHECK(j["rows"][0]["comparison"] == "100-0");
    CHECK(j["decision"]["kind"] == "dose");
    CHECK(j["decision"]["noael"] == "200");
    CHECK(j["decision"]["med"] == "500");
    // rows ascend in dose
    CHECK(j["rows"][3]["comparison"] == "750-0");
}

TEST_CASE("report JSON validates against the shipped schema") {
    std::ifstream f(std::string(NOAEL_SOURCE_DIR) + "/schemas/report-v1.schema.json");
    REQUIRE(f.is_open());
    nlohmann::json schema = nlohmann::json::parse(f);
    nlohmann::json j = to_json(wes_report());

    // minimal structural validation: required properties and primitive types
    auto type_ok = [](const nlohmann::json& val, const std::string& type) {
        if (type == "object") return val.is_object();
        if (type == "array") return val.is_array();
        if (type == "string") return val.is_string();
        if (type == "number") return val.is_number();
        if (type == "boolean") return val.is_boolean();
        if (type == "integer") return val.is_number_integer();
        return true;
    };
    for (const auto& req : schema["required"]) REQUIRE(j.contains(req.get<std::string>()));
    for (auto& [key, prop] : schema["properties"].items()) {
        if (!j.contains(key)) continue;
        CHECK(type_ok(j[key], prop["type"].get<std::string>()));
    }
    const auto& row_schema = schema["properties"]["rows"]["items"];
    for (const auto& row : j["rows"]) {
        for (const auto& req : row_schema["required"])
            REQUIRE(row.contains(req.get<std::string>()));
        for (auto& [key, prop] : row_schema["properties"].items()) {
            if (!row.contains(key) || !prop.contains("type")) continue;
            CHECK(type_ok(row[key], prop["type"].get<std::string>()));
        }
    }
    for (const auto& req : schema["properties"]["decision"]["required"])
        REQUIRE(j["decision"].contains(req.get<std::string>()));
}

TEST_CASE("JSON round-trips losslessly") {
    auto doc = wes_report();
    std::string text = to_json_string(doc);
    nlohmann::json back = nlohmann::json::parse(text);
    CHECK(back == to_json(doc));
    CHECK(nlohmann::json::parse(back.dump()) == back);
}

TEST_CASE("TSV and JSON carry identical numbers") {
    auto doc = wes_report();
    nlohmann::json j = to_json(doc);
    std::string tsv = to_tsv(doc);
    // every adjusted p printed in the TSV parses back to the JSON value
    std::istringstream lines(tsv);
    std::string line;
    std::size_t row = 0;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("comparison", 0) == 0) continue;
        std::istringstream cells(line);
        std::string comparison, stat, df, raw, adj;
        std::getline(cells, comparison, '\t');
        std::getline(cells, stat, '\t');
        std::getline(cells, df, '\t');
        std::getline(cells, raw, '\t');
        std::getline(cells, adj, '\t');
        REQUIRE(row < j["rows"].size());
        CHECK(j["rows"][row]["comparison"] == comparison);
        CHECK(std::stod(adj) == j["rows"][row]["adjusted_p"].get<double>());
        CHECK(std::stod(raw) == j["rows"][row]["raw_p"].get<double>());
        ++row;
    }
    CHECK(row == 4);
}

TEST_CASE("full precision changes the rounding policy only") {
    auto doc = wes_report();
    auto rounded = to_json(doc);
    doc.full_precision = true;
    auto full = to_json(doc);
    CHECK(rounded["rows"][0]["raw_p"].get<double>() !=
          full["rows"][0]["raw_p"].get<double>());
    CHECK_THAT(rounded["rows"][0]["raw_p"].get<double>(),
               Catch::Matchers::WithinRel(full["rows"][0]["raw_p"].get<double>(), 1e-5));
    CHECK(rounded["decision"] == full["decision"]);
}

TEST_CASE("reports are bit-stable for a fixed seed") {
    ReportDocument doc;
    doc.dataset_id = "wes";
    doc.config.method = Method::dunnett;  // stochastic path
    doc.config.direction = Direction::less;
    doc.analysis = run_analysis(DoseResponseDataset{builtin::wes()}, doc.config);
    std::string first = to_json_string(doc);
    doc.analysis = run_analysis(DoseResponseDataset{builtin::wes()}, doc.config);
    CHECK(to_json_string(doc) == first);
}

TEST_CASE("sha256 known vectors") {
    CHECK(sha256_hex(std::string("")) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex(std::string("abc")) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("svg plots are deterministic and shaped by the data") {
    auto wes = DoseResponseDataset{builtin::wes()};
    std::string a = svg_plot(wes, "wes");
    std::string b = svg_plot(wes, "wes");
    CHECK(a == b);
    // one box group per dose group
    std::size_t boxes = 0, pos = 0;
    while ((pos = a.find("class=\"box\"", pos)) != std::string::npos) {
        ++boxes;
        pos += 10;
    }
    CHECK(boxes == 5);
    CHECK(a.find("</svg>") != std::string::npos);

    std::string tamh = svg_plot(DoseResponseDataset{builtin::tamh()}, "tamh");
    boxes = 0;
    pos = 0;
    while ((pos = tamh.find("class=\"box\"", pos)) != std::string::npos) {
        ++boxes;
        pos += 10;
    }
    CHECK(boxes == 4);

    std::string csv = "dose,time,status\n0,10,0\n0,10,1\n5,10,1\n5,9,1\n";
    auto inc = parse_csv(csv, EndpointKind::incidence);
    std::string mosaic = svg_plot(inc, "inc");
    std::size_t tiles = 0;
    pos = 0;
    while ((pos = mosaic.find("class=\"mosaic\"", pos)) != std::string::npos) {
        ++tiles;
        pos += 10;
    }
    CHECK(tiles == 2);
}
