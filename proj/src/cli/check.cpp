#include <ostream>

#include <fmt/format.h>

#include "bvi/checkers.hpp"
#include "bvi/cli.hpp"
#include "bvi/random.hpp"

namespace bvi::cli {

int run_check(const std::string& problem_id, const std::string& property, const CheckOptions& opts,
              std::ostream& out, std::ostream& err) {
  try {
    const Property prop = property_from_string(property);
    if (!(opts.scale > 0.0)) throw InvalidArgument("check: --scale must be positive");
    const Problem pr = make_problem(problem_id, opts.params);
    const auto& c = pr.op.constants();
    std::optional<double> declared;
    switch (prop) {
      case Property::RelativeStrongMonotonicity: declared = c.mu; break;
      case Property::RelativeBoundedness: declared = c.M; break;
      case Property::RelativeSmoothness: declared = c.L; break;
    }
    if (!opts.constant && !declared) {
      throw InvalidArgument(fmt::format("check: problem '{}' declares no constant for {}; pass --constant",
                                        problem_id, property));
    }
    const double constant = (opts.constant ? *opts.constant : *declared) * opts.scale;
    const std::uint64_t seed = Rng::stream(opts.seed, "sampler").next_u64();
    const PropertyReport rep =
        check_property(prop, pr.op, BregmanDivergence(pr.prox), constant, pr.set, opts.samples, seed);

    nlohmann::ordered_json j;
    j["problem"] = pr.id;
    j["property"] = std::string(to_string(rep.property));
    j["constant"] = rep.constant;
    j["samples"] = rep.samples;
    j["worst_violation"] = rep.worst_violation;
    j["certified"] = rep.certified();
    auto& w = j["witness"] = nlohmann::ordered_json::array();
    for (const auto& v : rep.witness) w.push_back(std::vector<double>(v.data(), v.data() + v.size()));
    out << j.dump(2) << "\n";
    return 0;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    err << e.what() << "\n";
    return 2;
  }
}

}  // namespace bvi::cli
