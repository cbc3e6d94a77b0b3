#include <doctest.h>

#include <random>
#include <sstream>

#include "ld/engine.hpp"
#include "ld/errors.hpp"
#include "ld/problems/fixtures.hpp"
#include "ld/problems/image.hpp"
#include "support.hpp"

using namespace ld;

TEST_CASE("graph text format") {
  std::istringstream in("# three nodes\nsource s\ntarget b\nedge s a 1\nedge a b 2\nedge s b 5\n");
  const Graph g = read_graph(in);
  CHECK(g.nodes == 3);
  CHECK(*kld(graph_problem(g)).solution.goal_weight == 3);
  std::stringstream out;
  write_graph(out, g);
  const Graph back = read_graph(out);
  CHECK(back.edges.size() == 3);
  CHECK(back.names == g.names);

  std::istringstream missing("edge s a 1\n");
  CHECK_THROWS_AS(read_graph(missing), InputError);
  std::istringstream negative("source s\ntarget a\nedge s a -1\n");
  CHECK_THROWS_AS(read_graph(negative), InputError);
  std::istringstream junk("source s\ntarget s\nvertex q\n");
  CHECK_THROWS_WITH_AS(read_graph(junk), doctest::Contains("line 3"), InputError);
}

TEST_CASE("graph edge cases") {
  Graph same = fixture_g1();
  same.target = same.source;
  CHECK(*kld(graph_problem(same)).solution.goal_weight == 0);

  Graph bad = fixture_g1();
  bad.edges.push_back({0, 7, 1});
  CHECK_THROWS_AS(graph_problem(bad), InputError);
}

TEST_CASE("shortest paths match Dijkstra on random graphs") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    CAPTURE(seed);
    std::mt19937_64 gen(seed);
    Graph g;
    g.nodes = 2 + static_cast<std::uint32_t>(gen() % 49);
    const std::size_t edges = gen() % (4 * g.nodes);
    for (std::size_t i = 0; i < edges; ++i)
      g.edges.push_back({static_cast<std::uint32_t>(gen() % g.nodes), static_cast<std::uint32_t>(gen() % g.nodes),
                         static_cast<Weight>(gen() % 20)});
    g.source = static_cast<std::uint32_t>(gen() % g.nodes);
    g.target = static_cast<std::uint32_t>(gen() % g.nodes);
    const auto dist = testing::dijkstra(g);
    const Problem p = graph_problem(g);
    RunOptions opts;
    opts.stop = StopCondition::kQueueEmpty;
    const RunResult r = kld(p, opts);
    for (std::uint32_t v = 0; v < g.nodes; ++v) {
      const auto w = r.solution.weight_of(p.registry().intern("path", {static_cast<int>(v)}));
      CHECK(w.value_or(kInfinity) == dist[v]);
    }
  }
}

TEST_CASE("the two-token grammar parses with weight 0.8") {
  const Problem p = parse_problem(fixture_cfg1(), fixture_cfg1_tokens());
  CHECK(p.registry().to_string(p.goal()) == "phrase(0,1,3)");
  const RunResult r = kld(p);
  REQUIRE(r.goal_derived);
  CHECK(*r.solution.goal_weight == doctest::Approx(0.8));
  CHECK(*r.solution.goal_weight == *testing::cky(fixture_cfg1(), fixture_cfg1_tokens()));
}

TEST_CASE("grammar text format and errors") {
  std::istringstream in("start S\nS -> A B : 0.5\nA -> 'a' : 0.1 # comment\nB -> 'b' : 0.2\n");
  const Grammar g = read_grammar(in);
  CHECK(g.binary.size() == 1);
  CHECK(g.lexical.size() == 2);
  CHECK(g.nonterminals[g.start] == "S");
  std::stringstream out;
  write_grammar(out, g);
  CHECK(read_grammar(out).lexical.size() == 2);

  CHECK_THROWS_AS(parse_problem(g, std::vector<std::string>{"a", "z"}), InputError);
  CHECK_FALSE(kld(parse_problem(g, std::vector<std::string>{"b", "a"})).goal_derived);
  CHECK_FALSE(kld(parse_problem(g, std::vector<std::string>{})).goal_derived);

  std::istringstream bad("S -> A B C : 1\n");
  CHECK_THROWS_WITH_AS(read_grammar(bad), doctest::Contains("line 1"), InputError);
  std::istringstream negative("S -> 'a' : -1\n");
  CHECK_THROWS_AS(read_grammar(negative), InputError);
  std::istringstream unknown_start("start Q\nS -> 'a' : 1\n");
  CHECK_THROWS_AS(read_grammar(unknown_start), InputError);
}

TEST_CASE("parsing matches exhaustive CKY") {
  const char* alphabet[] = {"a", "b", "c"};
  int derived = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    CAPTURE(seed);
    const Grammar g = testing::random_grammar(seed);
    std::mt19937_64 gen(seed);
    std::vector<std::string> tokens;
    const std::size_t n = 1 + gen() % 6;
    for (std::size_t i = 0; i < n; ++i) tokens.push_back(alphabet[gen() % 3]);
    const auto expected = testing::cky(g, tokens);
    const RunResult r = kld(parse_problem(g, tokens));
    CHECK(r.goal_derived == expected.has_value());
    if (!expected) continue;
    ++derived;
    CHECK(*r.solution.goal_weight == *expected);
  }
  CHECK(derived > 10);
}

TEST_CASE("PGM and PPM files") {
  Image img(3, 2);
  img.set(2, 1, 200);
  std::stringstream pgm;
  write_pgm(pgm, img);
  CHECK(read_pgm(pgm) == img);

  std::istringstream comment(std::string("P5\n# made by hand\n2 1\n255\n") + std::string("\x01\x02", 2));
  const Image c = read_pgm(comment);
  CHECK(c.at(1, 0) == 2);

  std::istringstream truncated(std::string("P5\n4 4\n255\n") + "abc");
  CHECK_THROWS_AS(read_pgm(truncated), InputError);
  std::istringstream wrong("P2\n1 1\n255\n0\n");
  CHECK_THROWS_AS(read_pgm(wrong), InputError);

  RgbImage rgb(img);
  draw_segment(rgb, {0, 0}, {2, 1}, {255, 0, 0});
  std::ostringstream ppm;
  write_ppm(ppm, rgb);
  CHECK(ppm.str().substr(0, 11) == "P6\n3 2\n255\n");
  CHECK(ppm.str().size() == 11 + 18);
}

TEST_CASE("rasterization is symmetric and connected") {
  for (Pixel a : {Pixel{0, 0}, Pixel{5, 2}, Pixel{3, 7}})
    for (Pixel b : {Pixel{9, 1}, Pixel{2, 8}, Pixel{0, 5}}) {
      const auto ab = rasterize(a, b);
      CHECK(ab == rasterize(b, a));
      for (std::size_t i = 1; i < ab.size(); ++i) {
        CHECK(std::abs(ab[i].x - ab[i - 1].x) <= 1);
        CHECK(std::abs(ab[i].y - ab[i - 1].y) <= 1);
      }
    }
}
