/*
 * Copyright (C) 2026 The polcheck Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <set>

#include "polcheck/errors.hpp"
#include "polcheck/leak_extractor.hpp"
#include "polcheck/text.hpp"
#include "polcheck/xml_lite.hpp"
#include "test_support.hpp"

using namespace polcheck;

namespace {

std::filesystem::path xml_fixture(const std::string& name) {
    return test::fixtures_dir() / "xml" / name;
}

RuleTables& rules() {
    static RuleTables tables = RuleTables::load(test::data_dir());
    return tables;
}

std::vector<std::filesystem::path> corpus_files() {
    std::vector<std::filesystem::path> paths;
    for (int i = 1; i <= 17; ++i) {
        char name[16];
        std::snprintf(name, sizeof(name), "app%02d.xml", i);
        paths.push_back(xml_fixture(name));
    }
    return paths;
}

} // namespace

TEST_CASE("xml subset parser: structure, entities, errors with line/column") {
    XmlNode root = parse_xml("<?xml version=\"1.0\"?><a x=\"1 &amp; 2\"><b/><b>text</b></a>");
    CHECK(root.name == "a");
    CHECK(*root.attribute("x") == "1 & 2");
    CHECK(root.children_named("b").size() == 2);
    CHECK(root.children[1].text == "text");

    try {
        parse_xml("<a>\n  <b>\n</a>");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() > 0);
    }
    CHECK_THROWS_AS(parse_xml("<a x=1></a>"), ParseError);
    CHECK_THROWS_AS(parse_xml("<a x=\"1\" x=\"2\"/>"), ParseError);
    CHECK_THROWS_AS(parse_xml("<a>&bogus;</a>"), ParseError);
    CHECK_THROWS_AS(parse_xml("   "), ParseError);
}

TEST_CASE("golden: single-flow fixture parses to one record with one source") {
    FlowParseResult parsed = parse_flowdroid_xml(xml_fixture("app01.xml"));
    CHECK(parsed.format_version == "102");
    CHECK(parsed.issues.empty());
    REQUIRE(parsed.records.size() == 1);
    const FlowRecord& r = parsed.records[0];
    CHECK(r.id == 0);
    CHECK(r.source_file == "app01.xml");
    CHECK(r.sink_method.find("com.acme.weather.ForecastActivity") != std::string::npos);
    CHECK(r.sink_statement.find("android.util.Log") != std::string::npos);
    REQUIRE(r.sources.size() == 1);
    CHECK(r.sources[0].statement.find("getLastKnownLocation") != std::string::npos);
}

TEST_CASE("golden: multi-source fixture keeps source order") {
    FlowParseResult parsed = parse_flowdroid_xml(xml_fixture("app02.xml"));
    REQUIRE(parsed.records.size() == 1);
    REQUIRE(parsed.records[0].sources.size() == 2);
    CHECK(parsed.records[0].sources[0].statement.find("getDeviceId") != std::string::npos);
    CHECK(parsed.records[0].sources[1].statement.find("getSimSerialNumber") !=
          std::string::npos);
}

TEST_CASE("golden: multi-result fixture yields records in document order") {
    FlowParseResult parsed = parse_flowdroid_xml(xml_fixture("app03.xml"));
    REQUIRE(parsed.records.size() == 2);
    CHECK(parsed.records[0].id == 0);
    CHECK(parsed.records[1].id == 1);
}

TEST_CASE("golden: empty results element is an empty list, not an error") {
    FlowParseResult parsed = parse_flowdroid_xml(xml_fixture("empty_results.xml"));
    CHECK(parsed.records.empty());
    CHECK(parsed.issues.empty());
}

TEST_CASE("golden: malformed XML raises ParseError naming the file") {
    try {
        parse_flowdroid_xml(xml_fixture("err_malformed.xml"));
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("err_malformed.xml") != std::string::npos);
        CHECK(std::string(e.what()).find("line") != std::string::npos);
    }
}

TEST_CASE("golden: a result missing its sink is a record-level issue, parsing continues") {
    FlowParseResult parsed = parse_flowdroid_xml(xml_fixture("err_missing_sink.xml"));
    CHECK(parsed.records.size() == 2);
    REQUIRE(parsed.issues.size() == 1);
    CHECK(parsed.issues[0].result_index == 1);
    CHECK(parsed.issues[0].message.find("sink") != std::string::npos);
    // surviving records keep their document-order ids
    CHECK(parsed.records[0].id == 0);
    CHECK(parsed.records[1].id == 2);
}

TEST_CASE("parsing is order-preserving and idempotent") {
    for (const auto& path : {xml_fixture("app03.xml"), xml_fixture("app14.xml")}) {
        FlowParseResult a = parse_flowdroid_xml(path);
        FlowParseResult b = parse_flowdroid_xml(path);
        REQUIRE(a.records.size() == b.records.size());
        for (std::size_t i = 0; i < a.records.size(); ++i) {
            CHECK(a.records[i].id == b.records[i].id);
            CHECK(a.records[i].sink_statement == b.records[i].sink_statement);
            CHECK(a.records[i].sources.size() == b.records[i].sources.size());
        }
    }
}

TEST_CASE("signature helpers recover class, method, and invoked API") {
    const std::string sig = "<android.util.Log: int i(java.lang.String,java.lang.String)>";
    CHECK(signature_class(sig) == "android.util.Log");
    CHECK(signature_method(sig) == "i");
    CHECK(signature_class("garbage").empty());

    const std::string stmt =
        "$r3 = virtualinvoke $r2.<android.telephony.TelephonyManager: java.lang.String "
        "getDeviceId()>()";
    CHECK(invoked_signature(stmt) ==
          "<android.telephony.TelephonyManager: java.lang.String getDeviceId()>");
    CHECK(invoked_signature("x = y + 1").empty());
}

TEST_CASE("classify_flow: rule tables decide actor, action, and data") {
    Diagnostics diag;

    // location accessor flowing into an HTTP send inside the app package
    FlowRecord http;
    http.id = 0;
    http.source_file = "t.xml";
    http.sink_statement = "virtualinvoke $r6.<org.apache.http.client.HttpClient: "
                          "org.apache.http.HttpResponse "
                          "execute(org.apache.http.client.methods.HttpUriRequest)>($r4)";
    http.sink_method = "<com.example.app.Net: void send(java.lang.String)>";
    http.sources.push_back(
        {"$r3 = virtualinvoke $r2.<android.location.LocationManager: "
         "android.location.Location getLastKnownLocation(java.lang.String)>(\"gps\")",
         "<com.example.app.Main: void onCreate()>"});
    auto result = classify_flow(http, rules(), test::vocab(), nullptr, nullptr, diag);
    REQUIRE(std::holds_alternative<Triple>(result));
    Triple t = std::get<Triple>(result);
    CHECK(t.actor == Actor::first_party());
    CHECK(t.action == Action::parse("share"));
    CHECK(t.data.id() == "location");
    CHECK(t.provenance == Provenance::flow("t.xml", 0));

    // device-id accessor flowing into a logging call
    FlowRecord log;
    log.id = 3;
    log.source_file = "t.xml";
    log.sink_statement = "staticinvoke <android.util.Log: int i(java.lang.String,"
                         "java.lang.String)>(\"tag\", $r4)";
    log.sink_method = "<com.example.app.Dbg: void trace()>";
    log.sources.push_back(
        {"$r3 = virtualinvoke $r2.<android.telephony.TelephonyManager: java.lang.String "
         "getDeviceId()>()",
         "<com.example.app.Main: void onCreate()>"});
    result = classify_flow(log, rules(), test::vocab(), nullptr, nullptr, diag);
    REQUIRE(std::holds_alternative<Triple>(result));
    t = std::get<Triple>(result);
    CHECK(t.actor == Actor::first_party());
    CHECK(t.action == Action::parse("collect"));
    CHECK(t.data.id() == "device_id");

    // a sink enclosed in a known SDK package is attributed to that party
    FlowRecord sdk = log;
    sdk.sink_statement = "virtualinvoke $r6.<java.net.HttpURLConnection: java.io.OutputStream "
                         "getOutputStream()>()";
    sdk.sink_method = "<com.flurry.sdk.dn: void run()>";
    result = classify_flow(sdk, rules(), test::vocab(), nullptr, nullptr, diag);
    REQUIRE(std::holds_alternative<Triple>(result));
    t = std::get<Triple>(result);
    CHECK(t.actor == Actor::third_party("flurry"));
    CHECK(t.action == Action::parse("share"));
    CHECK(!t.action.negated);
}

TEST_CASE("classify_flow: unknown source with no model is unclassifiable") {
    Diagnostics diag;
    FlowRecord rec;
    rec.id = 0;
    rec.source_file = "t.xml";
    rec.sink_statement = "staticinvoke <android.util.Log: int i(java.lang.String,"
                         "java.lang.String)>(\"t\", $r1)";
    rec.sink_method = "<com.example.app.Dbg: void trace()>";
    rec.sources.push_back({"$r1 = virtualinvoke $r0.<com.example.app.Custom: java.lang.String "
                           "mystery()>()",
                           "<com.example.app.Main: void go()>"});
    auto result = classify_flow(rec, rules(), test::vocab(), nullptr, nullptr, diag);
    CHECK(std::holds_alternative<Unclassifiable>(result));
}

TEST_CASE("classify_flow: a valid model answer overrides the rule tables") {
    LlmClient client = test::replay_client({"leak_map.json"});
    Diagnostics diag;
    FlowParseResult parsed = parse_flowdroid_xml(xml_fixture("app01.xml"));
    auto result = classify_flow(parsed.records[0], rules(), test::vocab(), &client,
                                &test::prompts(), diag);
    REQUIRE(std::holds_alternative<Triple>(result));
    Triple t = std::get<Triple>(result);
    CHECK(t.actor == Actor::third_party("adnet"));
    CHECK(t.action == Action::parse("share"));
    CHECK(t.data.id() == "location");
}

TEST_CASE("classify_flow: a malformed model answer falls back to the rule tables") {
    LlmClient client = test::replay_client({"leak_map.json"});
    Diagnostics diag;
    FlowParseResult parsed = parse_flowdroid_xml(xml_fixture("app02.xml"));
    auto result = classify_flow(parsed.records[0], rules(), test::vocab(), &client,
                                &test::prompts(), diag);
    REQUIRE(std::holds_alternative<Triple>(result));
    Triple t = std::get<Triple>(result);
    CHECK(t.actor == Actor::first_party());
    CHECK(t.action == Action::parse("share"));
    CHECK(t.data.id() == "device_id");
    CHECK(diag.contains("falling back to rule tables"));
}

TEST_CASE("extract_leak_kg: duplicates across files collapse to one triple") {
    test::ScratchDir dir("dup");
    const std::string xml = read_file(xml_fixture("app01.xml"));
    write_file(dir.path() / "one.xml", xml);
    write_file(dir.path() / "two.xml", xml);
    Diagnostics diag;
    LeakExtraction out = extract_leak_kg({dir.path() / "one.xml", dir.path() / "two.xml"},
                                         rules(), test::vocab(), nullptr, nullptr, diag);
    CHECK(out.kg.size() == 1);
    CHECK(out.files.size() == 2);
    CHECK(out.files[0].classified == 1);
}

TEST_CASE("extract_leak_kg: one bad file does not abort the batch") {
    Diagnostics diag;
    LeakExtraction out =
        extract_leak_kg({xml_fixture("err_malformed.xml"), xml_fixture("app01.xml")}, rules(),
                        test::vocab(), nullptr, nullptr, diag);
    CHECK(out.parsed_files() == 1);
    CHECK(out.files[0].parse_failed);
    CHECK_FALSE(out.files[1].parse_failed);
    CHECK(out.kg.size() == 1);
    CHECK(diag.contains("skipped"));
}

TEST_CASE("extract_leak_kg: all records unclassifiable yields an empty graph plus warnings") {
    test::ScratchDir dir("unclass");
    write_file(dir.path() / "odd.xml", R"xml(<?xml version="1.0"?>
<DataFlowResults FileFormatVersion="102">
  <Results>
    <Result>
      <Sink Statement="staticinvoke &lt;android.util.Log: int i(java.lang.String,java.lang.String)&gt;(&quot;t&quot;, $r1)" Method="&lt;com.example.app.Dbg: void t()&gt;">
      </Sink>
      <Sources>
        <Source Statement="$r1 = virtualinvoke $r0.&lt;com.example.app.Custom: java.lang.String mystery()&gt;()" Method="&lt;com.example.app.Main: void go()&gt;"/>
      </Sources>
    </Result>
  </Results>
</DataFlowResults>
)xml");
    Diagnostics diag;
    LeakExtraction out = extract_leak_kg({dir.path() / "odd.xml"}, rules(), test::vocab(),
                                         nullptr, nullptr, diag);
    CHECK(out.kg.empty());
    CHECK(diag.contains("unclassifiable"));
}

TEST_CASE("the 17-file corpus yields one triple per distinct classified flow") {
    Diagnostics diag;
    LeakExtraction out =
        extract_leak_kg(corpus_files(), rules(), test::vocab(), nullptr, nullptr, diag);

    // independent route: enumerate per-record classifications and count the
    // distinct practice keys with a plain set
    std::set<std::string> distinct;
    std::size_t classified = 0;
    for (const auto& path : corpus_files()) {
        Diagnostics scratch;
        for (const FlowRecord& record : parse_flowdroid_xml(path).records) {
            auto result =
                classify_flow(record, rules(), test::vocab(), nullptr, nullptr, scratch);
            if (auto* t = std::get_if<Triple>(&result)) {
                distinct.insert(t->practice_key());
                ++classified;
            }
        }
    }
    CHECK(out.kg.size() == distinct.size());
    CHECK(classified == 30);        // corpus shape: every record classifies
    CHECK(out.kg.size() == 26);     // four cross-file duplicates collapse
    CHECK(out.files.size() == 17);

    // merged order is (file order, record order)
    std::size_t last_file_rank = 0;
    for (const Triple& t : out.kg.triples()) {
        std::size_t rank = 0;
        for (std::size_t i = 0; i < corpus_files().size(); ++i)
            if (corpus_files()[i].filename().string() == t.provenance.file())
                rank = i;
        CHECK(rank >= last_file_rank);
        last_file_rank = rank;
    }
}

TEST_CASE("extract_leak_kg requires at least one path") {
    Diagnostics diag;
    CHECK_THROWS_AS(
        extract_leak_kg({}, rules(), test::vocab(), nullptr, nullptr, diag),
        PreconditionError);
}
