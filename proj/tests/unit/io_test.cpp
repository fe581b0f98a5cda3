#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "kamnf/csv.hpp"
#include "kamnf/errors.hpp"
#include "kamnf/generators.hpp"
#include "kamnf/io.hpp"
#include "kamnf/nls.hpp"

using namespace kamnf;
using lattice::Mode;

namespace {
std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }
std::size_t count_fields(const std::string& line) { return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1; }
}  // namespace

TEST_CASE("17-digit formatting") {
  CHECK(io::fmt17(0.1) == "0.10000000000000001");
  CHECK(io::fmt17(1.0) == "1");
  CHECK(io::fmt17(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(io::fmt17(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(io::fmt17(std::nan("")) == "nan");
}

TEST_CASE("property: Hamiltonian JSON round trip is byte-identical") {
  ham::HamParams p;
  p.lattice.d = 2;
  p.mode_radius = 1;
  rng::Stream st(15);
  gen::HamiltonianLaw law;
  law.terms = 12;
  law.max_degree = 6;
  for (int i = 0; i < 50; ++i) {
    const auto h = gen::random_hamiltonian(p, law, st);
    const auto text = io::hamiltonian_to_json(h);
    const auto back = io::hamiltonian_from_json(text);
    CHECK(back.params() == h.params());
    CHECK(ham::max_abs_difference(back, h) == 0.0);
    CHECK(io::hamiltonian_to_json(back) == text);
  }
}

TEST_CASE("malformed Hamiltonian files are validation errors") {
  CHECK_THROWS_AS(io::hamiltonian_from_json("{"), ValidationError);
  CHECK_THROWS_AS(io::hamiltonian_from_json("{\"d\": 1}"), ValidationError);
  nls::NlsConfig cfg;
  auto text = io::hamiltonian_to_json(nls::build_cubic_nls(cfg));
  text.replace(text.find("\"d\": 1"), 6, "\"d\": 9");
  CHECK_THROWS_AS(io::hamiltonian_from_json(text), ValidationError);
}

TEST_CASE("frequency JSON round trip") {
  dioph::FrequencyVector omega{{Mode{-1, 0}, 0.25}, {Mode{0, 0}, 0.125}, {Mode{1, 1}, 0.7}};
  const auto back = io::frequency_from_json(io::frequency_to_json(omega));
  CHECK(back == omega);
}

TEST_CASE("CSV tables carry a schema line and a fixed header") {
  kam::StepReport rep;
  rep.initial = true;
  const std::vector<kam::StepReport> reports{rep, rep};
  const auto text = io::steps_csv(reports);
  std::istringstream in(text);
  std::string schema;
  std::string header;
  std::string row;
  std::getline(in, schema);
  std::getline(in, header);
  std::getline(in, row);
  CHECK(schema == "# schema=kamnf-steps/1");
  CHECK(count_fields(header) == count_fields(row));
  CHECK(header.rfind("initial,s,rho,", 0) == 0);

  dioph::MeasureEstimate m;
  CHECK(first_line(io::measure_csv(std::vector{m})) == "# schema=kamnf-measure/1");
  verify::LemmaCase c;
  c.name = "g_max";
  c.seconds = 2.5;
  const auto lemma = io::lemma_csv(std::vector{c});
  CHECK(lemma.substr(lemma.rfind(',') + 1) == "0\n");
  const auto timed = io::lemma_csv(std::vector{c}, true);
  CHECK(timed.substr(timed.rfind(',') + 1) == "2.5\n");
}

TEST_CASE("files are written with parent directories") {
  const auto dir = std::filesystem::temp_directory_path() / "kamnf_io_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  io::write_file(dir / "x.txt", "hello\n");
  CHECK(io::read_file(dir / "x.txt") == "hello\n");
  std::filesystem::remove_all(dir.parent_path());
  CHECK_THROWS_AS(io::read_file(dir / "missing.txt"), ValidationError);
}
