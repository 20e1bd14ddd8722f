#include <doctest.h>

#include <cmath>
#include <fstream>

#include "gazeforge/error.hpp"
#include "gazeforge/io.hpp"
#include "malformed_corpus.hpp"
#include "oracles.hpp"

using namespace gazeforge;
using L = MovementLabel;

TEST_CASE("number formatting") {
    CHECK(io::format_fixed3(16.6666667) == "16.667");
    CHECK(io::format_fixed3(-0.0001) == "0.000");
    CHECK(io::format_fixed3(1000.0) == "1000.000");
    CHECK(io::format_sig6(412.123456) == "412.123");
    CHECK(io::format_sig6(0.0) == "0");
    CHECK(io::format_sig6(1e-7) == "1e-07");
    CHECK(io::format_exact(0.1) == "0.1");
    CHECK(std::stod(io::format_exact(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("velocity CSV layout") {
    SampledSignal s{{{1.0 / 60.0, 12.5, L::Fixation}, {2.0 / 60.0, 401.25, L::Saccade},
                     {3.0 / 60.0, 20.0, L::SmoothPursuit}, {4.0 / 60.0, 333.0, L::Noise}}};
    CHECK(io::write_velocity_csv(s) ==
          "t_ms,velocity_deg_s,label\n16.667,12.5,FIX\n33.333,401.25,SACC\n50.000,20,SP\n66.667,333,NOISE\n");
}

TEST_CASE("velocity CSV round-trip") {
    RandomSource rng(1);
    SampledSignal s;
    for (int i = 0; i < 500; ++i) {
        s.samples.push_back({(i + 1) * 0.004, std::round(rng.uniform() * 1e5) / 100.0, static_cast<L>(rng.index(4))});
    }
    const std::string text = io::write_velocity_csv(s);
    const auto back = io::read_velocity_csv(text);
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(back.samples[i].t == doctest::Approx(s.samples[i].t).epsilon(1e-12));
        CHECK(back.samples[i].velocity == s.samples[i].velocity);
        CHECK(back.samples[i].label == s.samples[i].label);
    }
    // Writing what was read reproduces the bytes.
    CHECK(io::write_velocity_csv(back) == text);
}

TEST_CASE("gaze CSV round-trip") {
    RandomSource rng(2);
    GazeTrace t{640, 480, 30.0, {}};
    for (int i = 0; i < 300; ++i) {
        GazeSample g;
        g.t = (i + 1) / 250.0;
        g.velocity = std::round(rng.uniform() * 5000.0) / 10.0;
        g.label = static_cast<L>(rng.index(4));
        g.x = std::round(rng.uniform() * 639000.0) / 1000.0;
        g.y = std::round(rng.uniform() * 479000.0) / 1000.0;
        t.samples.push_back(g);
    }
    const std::string text = io::write_gaze_csv(t);
    CHECK(text.rfind("t_ms,velocity_deg_s,label,x_px,y_px\n", 0) == 0);
    const auto back = io::read_gaze_csv(text);
    REQUIRE(back.size() == t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(back.samples[i].x == t.samples[i].x);
        CHECK(back.samples[i].y == t.samples[i].y);
        CHECK(back.samples[i].label == t.samples[i].label);
    }
    CHECK(io::write_gaze_csv(back) == text);
}

TEST_CASE("CSV readers accept CRLF and a missing final newline") {
    const auto a = io::read_velocity_csv("t_ms,velocity_deg_s,label\r\n1.000,2,FIX\r\n2.000,3,SACC");
    REQUIRE(a.size() == 2);
    CHECK(a.samples[1].label == L::Saccade);
    CHECK(a.samples[1].t == 0.002);
    CHECK(io::read_velocity_csv("t_ms,velocity_deg_s,label\n").empty());
}

TEST_CASE("malformed inputs are rejected with their position") {
    const auto cases = corpus::malformed_inputs();
    CHECK(cases.size() >= 20);
    for (const auto& c : cases) {
        CAPTURE(c.name);
        std::string message;
        try {
            switch (c.reader) {
                case corpus::Reader::Velocity: io::read_velocity_csv(c.bytes); break;
                case corpus::Reader::Gaze: io::read_gaze_csv(c.bytes); break;
                case corpus::Reader::Pgm: io::read_pgm(c.bytes); break;
            }
        } catch (const ParseError& e) {
            message = e.what();
        }
        CAPTURE(message);
        CHECK(message.find(c.position) != std::string::npos);
    }
}

TEST_CASE("PGM binary round-trip is exact on the 8-bit lattice") {
    std::mt19937_64 eng(3);
    Grid g(37, 23);
    for (auto& v : g.values) v = static_cast<double>(eng() % 256) / 255.0;
    const std::string bytes = io::write_pgm(g);
    CHECK(bytes.rfind("P5\n37 23\n255\n", 0) == 0);
    const Grid back = io::read_pgm(bytes);
    CHECK(back.width == 37);
    CHECK(back.height == 23);
    CHECK(back.values == g.values);
    CHECK(io::write_pgm(back) == bytes);
}

TEST_CASE("PGM writer rounds half up and clamps") {
    Grid g(4, 1);
    g.values = {127.5 / 255.0, -1.0, 2.0, 0.4 / 255.0};
    const std::string b = io::write_pgm(g);
    const std::string payload = b.substr(b.size() - 4);
    CHECK(static_cast<unsigned char>(payload[0]) == 128);
    CHECK(static_cast<unsigned char>(payload[1]) == 0);
    CHECK(static_cast<unsigned char>(payload[2]) == 255);
    CHECK(static_cast<unsigned char>(payload[3]) == 0);
    CHECK_THROWS_AS(io::write_pgm(Grid{}), ParameterError);
}

TEST_CASE("PGM ASCII, comments and 16-bit samples") {
    const Grid a = io::read_pgm("P2\n# a comment\n3 2 # trailing\n4\n0 1 2\n3 4 4\n");
    REQUIRE(a.width == 3);
    CHECK(a.values == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0, 1.0});
    const Grid b = io::read_pgm(std::string("P5 2 1 1000\n\x03\xE8\x01\xF4", 16));
    REQUIRE(b.values.size() == 2);
    CHECK(b.values[0] == 1.0);
    CHECK(b.values[1] == 0.5);
}

TEST_CASE("atomic writes leave no temporaries and no partial files") {
    oracle::TempDir dir("io");
    const auto path = dir / "out.csv";
    io::write_file_atomic(path, "hello\n");
    CHECK(io::read_file(path) == "hello\n");
    io::write_file_atomic(path, "again\n");
    CHECK(io::read_file(path) == "again\n");
    std::size_t files = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir.path())) {
        (void)e;
        ++files;
    }
    CHECK(files == 1);
    CHECK_THROWS_AS(io::write_file_atomic(dir / "missing/out.csv", "x"), IoError);
    CHECK_FALSE(std::filesystem::exists(dir / "missing/out.csv"));
    CHECK_THROWS_AS(io::read_file(dir / "nope.csv"), IoError);
}

TEST_CASE("frames are listed in numeric order") {
    oracle::TempDir dir("frames");
    for (const char* name : {"frame10.pgm", "frame2.pgm", "frame1.pgm", "notes.txt"}) {
        std::ofstream(dir / name) << "x";
    }
    const auto frames = io::list_frames(dir.path());
    REQUIRE(frames.size() == 3);
    CHECK(frames[0].filename() == "frame1.pgm");
    CHECK(frames[1].filename() == "frame2.pgm");
    CHECK(frames[2].filename() == "frame10.pgm");
    CHECK_THROWS_AS(io::list_frames(dir / "absent"), IoError);
}

TEST_CASE("load_pgm prefixes the file name") {
    oracle::TempDir dir("pgm");
    std::ofstream(dir / "bad.pgm") << "P7\n";
    CHECK_THROWS_WITH_AS(io::load_pgm(dir / "bad.pgm"), doctest::Contains("bad.pgm"), ParseError);
}

TEST_CASE("summary and pooled error CSV") {
    ErrorSummary s;
    s.pooled[L::Fixation] = {1.0, 4.0};
    s.stats[L::Fixation] = summarize({1.0, 4.0});
    const std::string summary = io::write_summary_csv(s);
    CHECK(summary.rfind("type,stat,value\nFIX,count,2\nFIX,mean,2.5\n", 0) == 0);
    CHECK(io::write_pooled_errors_csv(s) == "type,squared_error\nFIX,1\nFIX,4\n");
    TargetSet t{10, 10, {{1.5, 2.25, 0.75}}};
    CHECK(io::write_targets_csv(t) == "x_px,y_px,weight\n1.500,2.250,0.75\n");
}
