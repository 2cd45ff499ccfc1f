#ifndef GPBOUND_PROBLEM_IO_HPP
#define GPBOUND_PROBLEM_IO_HPP

#include "gpbound/bounds.hpp"
#include "gpbound/hypercube.hpp"

#include <json.hpp>

#include <string>

namespace gpbound {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProblemFile {
  SemialgebraicProblem problem;
  PathChoice path = PathChoice::Auto;
};

/// Either {"n":..,"terms":[{"alpha":[..],"c":..}]} or a polynomial string.
Polynomial polynomial_from_json(const nlohmann::json& j, std::size_t n);
nlohmann::json polynomial_to_json(const Polynomial& f);

/// {"n","d"?,"f","g"?,"A"?,"path"?,"box"?}. d defaults to the least even
/// integer >= max{2, degrees}. Throws FormatError.
ProblemFile parse_problem(const std::string& text);
ProblemFile read_problem_file(const std::string& path);
nlohmann::json problem_to_json(const ProblemFile& p);

nlohmann::json result_to_json(const BoundResult& r);
nlohmann::json trivial_to_json(const TrivialBoundReport& r);

}  // namespace gpbound

#endif  // GPBOUND_PROBLEM_IO_HPP
