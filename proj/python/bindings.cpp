#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "twinkit/dataset.hpp"
#include "twinkit/energy.hpp"
#include "twinkit/error.hpp"
#include "twinkit/multiplet.hpp"
#include "twinkit/oracle.hpp"
#include "twinkit/twinning.hpp"

namespace py = pybind11;
using namespace twinkit;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

RawTable to_table(const Array& a) {
  if (a.ndim() == 1) {
    auto n = static_cast<std::size_t>(a.shape(0));
    return {Matrix(n, 1, std::vector<double>(a.data(), a.data() + n)), {"x1"}};
  }
  if (a.ndim() != 2) throw py::value_error("data must be a 1-D or 2-D array");
  const auto n = static_cast<std::size_t>(a.shape(0));
  const auto d = static_cast<std::size_t>(a.shape(1));
  RawTable t{Matrix(n, d, std::vector<double>(a.data(), a.data() + n * d)), {}};
  for (std::size_t j = 0; j < d; ++j) t.column_names.push_back("x" + std::to_string(j + 1));
  return t;
}

Array to_array(const Matrix& m) {
  Array out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

Dataset prepare(const Array& a, bool scale, const std::string& constant_columns) {
  auto table = to_table(a);
  if (!scale) return as_is(table);
  return standardize(table, constant_columns == "zero" ? ConstantColumnPolicy::zero
                                                       : ConstantColumnPolicy::reject);
}

StartPolicy start_policy(std::optional<RowIndex> start_index, std::optional<std::uint64_t> seed) {
  if (start_index && seed) throw py::value_error("give start_index or seed, not both");
  if (start_index) return FixedIndex{*start_index};
  if (seed) return RandomStart{*seed};
  return FarthestFromCentroid{};
}

py::dict twin_dict(const TwinResult& r) {
  py::dict d;
  d["d1"] = r.d1;
  d["d2"] = r.d2;
  d["subsets"] = r.subsets;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Energy-distance twinning of tabular data";

  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def(
      "load_csv",
      [](const std::string& path, std::optional<std::vector<std::string>> columns) {
        auto t = load_csv(path, columns);
        return py::make_tuple(to_array(t.values), t.column_names);
      },
      py::arg("path"), py::arg("columns") = py::none());

  m.def(
      "standardize",
      [](const Array& data, const std::string& constant_columns) {
        auto ds = prepare(data, true, constant_columns);
        return py::make_tuple(to_array(ds.values), ds.means, ds.sds);
      },
      py::arg("data"), py::arg("constant_columns") = "reject");

  m.def(
      "twin",
      [](const Array& data, std::size_t r, std::optional<RowIndex> start_index,
         std::optional<std::uint64_t> seed, bool standardize) {
        auto ds = prepare(data, standardize, "reject");
        TwinResult result;
        {
          py::gil_scoped_release release;
          result = twin(ds, {r, start_policy(start_index, seed)});
        }
        return twin_dict(result);
      },
      py::arg("data"), py::arg("r"), py::arg("start_index") = py::none(),
      py::arg("seed") = py::none(), py::arg("standardize") = true,
      "Split rows into twins: d1 holds ceil(N/r) rows, d2 the rest.");

  m.def(
      "twin_compress",
      [](const Array& data, std::size_t r, std::optional<RowIndex> start_index,
         std::optional<std::uint64_t> seed, bool standardize) {
        auto ds = prepare(data, standardize, "reject");
        py::gil_scoped_release release;
        return twin_compress(ds, {r, start_policy(start_index, seed)});
      },
      py::arg("data"), py::arg("r"), py::arg("start_index") = py::none(),
      py::arg("seed") = py::none(), py::arg("standardize") = true);

  m.def(
      "multiplets",
      [](const Array& data, std::size_t k, const std::string& strategy,
         std::optional<RowIndex> start_index, std::optional<std::uint64_t> seed, bool standardize) {
        auto ds = prepare(data, standardize, "reject");
        const auto s = parse_strategy(strategy);
        MultipletResult result;
        {
          py::gil_scoped_release release;
          result = make_multiplets(ds, s, k, start_policy(start_index, seed));
        }
        py::dict d;
        d["folds"] = result.folds;
        d["strategy"] = to_string(result.strategy);
        d["per_fold_energy"] = result.per_fold_energy;
        d["max_energy"] = result.max_energy;
        return d;
      },
      py::arg("data"), py::arg("k"), py::arg("strategy") = "s2",
      py::arg("start_index") = py::none(), py::arg("seed") = py::none(),
      py::arg("standardize") = true);

  m.def(
      "energy_full",
      [](const Array& data, const IndexSet& subset, bool standardize) {
        return energy_full(subset, prepare(data, standardize, "reject"));
      },
      py::arg("data"), py::arg("subset"), py::arg("standardize") = true);
  m.def(
      "energy_between",
      [](const Array& data, const IndexSet& a, const IndexSet& b, bool standardize) {
        return energy_between(a, b, prepare(data, standardize, "reject"));
      },
      py::arg("data"), py::arg("part_a"), py::arg("part_b"), py::arg("standardize") = true);
  m.def(
      "energy_plot_metric",
      [](const Array& data, const IndexSet& subset, bool standardize) {
        return energy_plot_metric(subset, prepare(data, standardize, "reject"));
      },
      py::arg("data"), py::arg("subset"), py::arg("standardize") = true);
  m.def(
      "verify_proposition1",
      [](const Array& data, const IndexSet& subset, bool standardize) {
        auto c = verify_proposition1(subset, prepare(data, standardize, "reject"));
        return py::make_tuple(c.lhs, c.rhs, c.relative_gap);
      },
      py::arg("data"), py::arg("subset"), py::arg("standardize") = true);

  m.def(
      "generate_mvn",
      [](std::size_t n, std::size_t d, std::uint64_t seed) {
        return to_array(generate_mvn({n, d, seed}).values);
      },
      py::arg("n"), py::arg("d"), py::arg("seed"));
  m.def(
      "generate_parabola",
      [](std::size_t n, std::uint64_t seed) { return to_array(generate_parabola(n, seed).values); },
      py::arg("n"), py::arg("seed"));
}
