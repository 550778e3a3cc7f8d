#include "rootldpc/analysis.hpp"
#include "rootldpc/channel.hpp"
#include "rootldpc/construct.hpp"
#include "rootldpc/de.hpp"
#include "rootldpc/decoder.hpp"
#include "rootldpc/gf2.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <sstream>

namespace py = pybind11;
using namespace rootldpc;

namespace {

std::vector<std::vector<int>> to_rows(const gf2::BinaryMatrix& m) {
    std::vector<std::vector<int>> out(m.rows(), std::vector<int>(m.cols(), 0));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m.get(r, c);
    return out;
}

gf2::BinaryMatrix from_rows(const std::vector<std::vector<int>>& rows) {
    if (rows.empty()) return {};
    gf2::BinaryMatrix m(rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size())
            throw std::invalid_argument("ragged matrix rows");
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            if (rows[r][c]) m.set(r, c, true);
    }
    return m;
}

} // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "root-LDPC codes on block-fading channels: construction, decoding, "
                "density evolution and outage analysis";

    py::class_<gf2::BinaryMatrix>(mod, "BinaryMatrix")
        .def(py::init<std::size_t, std::size_t>())
        .def_static("identity", &gf2::BinaryMatrix::identity)
        .def_static("from_rows", &from_rows)
        .def_property_readonly("rows", &gf2::BinaryMatrix::rows)
        .def_property_readonly("cols", &gf2::BinaryMatrix::cols)
        .def("get", &gf2::BinaryMatrix::get)
        .def("set", &gf2::BinaryMatrix::set)
        .def("to_rows", &to_rows)
        .def("alist", [](const gf2::BinaryMatrix& m) {
            std::stringstream ss;
            gf2::write_alist(ss, m);
            return ss.str();
        })
        .def("__eq__", &gf2::BinaryMatrix::operator==);

    mod.def("read_alist", [](const std::string& text) {
        std::stringstream ss(text);
        return gf2::read_alist(ss);
    });
    mod.def("read_alist_file", &gf2::read_alist_file);
    mod.def("write_alist_file", &gf2::write_alist_file);

    mod.def("rank", &gf2::rank);
    mod.def("singleton_bound", &gf2::singleton_bound);

    py::class_<gf2::DiversityResult>(mod, "DiversityResult")
        .def_readonly("d", &gf2::DiversityResult::d)
        .def_readonly("wstar", &gf2::DiversityResult::wstar)
        .def_readonly("trivial_code", &gf2::DiversityResult::trivial_code);
    mod.def("diversity_analysis", &gf2::diversity_analysis, py::arg("h"), py::arg("nc"),
            py::arg("budget") = gf2::kDefaultEnumerationBudget);

    py::class_<construct::DegreeDistribution>(mod, "DegreeDistribution")
        .def(py::init([](std::vector<std::pair<int, double>> lam,
                         std::vector<std::pair<int, double>> rho) {
                 construct::DegreeDistribution dd;
                 dd.lambda = std::move(lam);
                 dd.rho = std::move(rho);
                 dd.validate();
                 return dd;
             }),
             py::arg("lam"), py::arg("rho"))
        .def_static("regular", &construct::DegreeDistribution::regular)
        .def_static("irregular_half_rate", &construct::DegreeDistribution::irregular_half_rate)
        .def_readonly("lam", &construct::DegreeDistribution::lambda)
        .def_readonly("rho", &construct::DegreeDistribution::rho)
        .def("design_rate", &construct::DegreeDistribution::design_rate);

    py::class_<construct::RootLdpcCode>(mod, "RootLdpcCode")
        .def_readonly("h", &construct::RootLdpcCode::h)
        .def_property_readonly("n", &construct::RootLdpcCode::n)
        .def("info_columns", &construct::RootLdpcCode::info_columns)
        .def_property_readonly("block_of_column",
                               [](const construct::RootLdpcCode& c) { return c.block_of_column; });

    mod.def("build_root_regular", &construct::build_root_regular, py::arg("n"), py::arg("seed"));
    mod.def("build_root_irregular", &construct::build_root_irregular, py::arg("n"),
            py::arg("dd"), py::arg("seed"));
    mod.def("random_regular_ldpc", &construct::random_regular_ldpc, py::arg("n"),
            py::arg("dv"), py::arg("dc"), py::arg("seed"));
    mod.def("build_wstar2", &construct::build_wstar2);
    mod.def("build_wstar3", &construct::build_wstar3);
    mod.def("is_ml_full_diversity", &construct::is_ml_full_diversity);
    mod.def("multiedge_fraction", &construct::multiedge_fraction);
    mod.def("save_code", &construct::save_code);
    mod.def("load_code", &construct::load_code);

    mod.def("bpsk_capacity_ebn0", &channel::bpsk_capacity_ebn0);
    mod.def("bpsk_awgn_mi", &channel::bpsk_awgn_mi);
    mod.def(
        "outage_probability",
        [](double ebn0_db, double rate, std::size_t nc, std::size_t samples,
           std::uint64_t seed) {
            auto est = channel::outage_probability(rate * std::pow(10.0, ebn0_db / 10.0),
                                                   rate, nc, samples, seed);
            return py::make_tuple(est.p, est.ci_low, est.ci_high);
        },
        py::arg("ebn0_db"), py::arg("rate") = 0.5, py::arg("nc") = 2,
        py::arg("samples") = 1000000, py::arg("seed") = 1);
    mod.def(
        "outage_probability_quadrature",
        [](double ebn0_db, double rate) {
            return channel::outage_probability_quadrature(
                rate * std::pow(10.0, ebn0_db / 10.0), rate);
        },
        py::arg("ebn0_db"), py::arg("rate") = 0.5);

    py::class_<decode::WerPoint>(mod, "WerPoint")
        .def_readonly("ebn0_db", &decode::WerPoint::ebn0_db)
        .def_readonly("trials", &decode::WerPoint::trials)
        .def_readonly("word_errors", &decode::WerPoint::word_errors)
        .def_readonly("wer", &decode::WerPoint::wer)
        .def_readonly("ci_low", &decode::WerPoint::ci_low)
        .def_readonly("ci_high", &decode::WerPoint::ci_high)
        .def_readonly("avg_iterations", &decode::WerPoint::avg_iterations);

    mod.def(
        "simulate_wer",
        [](const gf2::BinaryMatrix& h, const std::vector<std::size_t>& info_bits,
           const std::vector<double>& ebn0_list, const std::string& fading,
           double erasure_prob, const std::string& decoder, std::size_t max_iter,
           std::size_t min_errors, std::size_t max_trials, std::uint64_t seed,
           unsigned workers) {
            channel::ChannelConfig ch;
            ch.mode = fading == "erasure" ? channel::FadingMode::Erasure
                                          : channel::FadingMode::Rayleigh;
            ch.erasure_prob = erasure_prob;
            decode::DecoderConfig dec;
            dec.variant = decoder == "minsum" ? decode::DecoderVariant::MinSum
                                              : decode::DecoderVariant::Bp;
            dec.max_iter = max_iter;
            decode::StopRule stop{min_errors, max_trials};
            return decode::simulate_wer(h, info_bits, ch, dec, ebn0_list, stop, seed, workers);
        },
        py::arg("h"), py::arg("info_bits"), py::arg("ebn0_list"),
        py::arg("fading") = "rayleigh", py::arg("erasure_prob") = 0.0,
        py::arg("decoder") = "bp", py::arg("max_iter") = 50, py::arg("min_errors") = 100,
        py::arg("max_trials") = 10000000, py::arg("seed") = 1, py::arg("workers") = 0,
        py::call_guard<py::gil_scoped_release>());

    py::class_<de::ThresholdReport>(mod, "ThresholdReport")
        .def_readonly("ebn0_db", &de::ThresholdReport::ebn0_db)
        .def_readonly("capacity_ebn0_db", &de::ThresholdReport::capacity_ebn0_db)
        .def_readonly("gap_db", &de::ThresholdReport::gap_db)
        .def_readonly("ratio_absolute", &de::ThresholdReport::ratio_absolute)
        .def_readonly("ratio_gap", &de::ThresholdReport::ratio_gap);

    mod.def(
        "awgn_threshold",
        [](const construct::DegreeDistribution& dd, bool root, double step, double range,
           std::size_t max_iter, double lo_db, double hi_db) {
            de::DeOptions opt;
            opt.grid = de::LlrGrid{step, range};
            opt.max_iter = max_iter;
            return de::awgn_threshold(dd, root, opt, lo_db, hi_db);
        },
        py::arg("dd"), py::arg("root"), py::arg("step") = 0.05, py::arg("range") = 30.0,
        py::arg("max_iter") = 500, py::arg("lo_db") = 0.05, py::arg("hi_db") = 3.0,
        py::call_guard<py::gil_scoped_release>());

    mod.def(
        "de_asymptotic_wer",
        [](const construct::DegreeDistribution& dd, bool root, double ebn0_db,
           std::size_t samples, std::uint64_t seed, double step, double range,
           const std::string& sampling, unsigned workers) {
            de::DeOptions opt;
            opt.grid = de::LlrGrid{step, range};
            auto mode = sampling == "importance" ? de::FadingSampling::ImportanceBox
                                                 : de::FadingSampling::RayleighMc;
            auto w = de::de_asymptotic_wer(dd, root, ebn0_db, samples, seed, opt, mode, workers);
            return py::make_tuple(w.wer, w.ci_low, w.ci_high);
        },
        py::arg("dd"), py::arg("root"), py::arg("ebn0_db"), py::arg("samples") = 10000,
        py::arg("seed") = 1, py::arg("step") = 0.15, py::arg("range") = 25.0,
        py::arg("sampling") = "mc", py::arg("workers") = 0,
        py::call_guard<py::gil_scoped_release>());

    mod.def("chi2_pdf",
            [](double y, double a) { return analysis::chi2_pdf(y, {a, 1.0 - a}); });
    mod.def("chi2_cdf",
            [](double t, double a) { return analysis::chi2_cdf(t, {a, 1.0 - a}); });
    mod.def("chi2_coding_loss_db", [](double a) {
        auto l = analysis::chi2_coding_loss_db({a, 1.0 - a});
        return py::make_tuple(l.loss_db, l.diversity_order);
    });
    mod.def("g_function", &analysis::g_function);
}
