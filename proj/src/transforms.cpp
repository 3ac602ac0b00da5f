#include "anslab/transforms.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace anslab {
namespace {

// Plans are cached per lattice shape. Created with FFTW_UNALIGNED so they
// can execute on any caller buffer; execution itself is thread-safe.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache c;
        return c;
    }

    fftw_plan get(const std::vector<int>& dims, int sign, bool horizontal_only) {
        std::scoped_lock lock(mu_);
        auto key = std::make_tuple(dims, sign, horizontal_only);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::int64_t total = 1;
        for (int n : dims) total *= n;
        std::vector<fftw_complex> buf(total);
        fftw_plan p;
        if (horizontal_only) {
            const int rank = static_cast<int>(dims.size()) - 1;
            const int howmany = dims.back();
            p = fftw_plan_many_dft(rank, dims.data(), howmany,
                                   buf.data(), nullptr, howmany, 1,
                                   buf.data(), nullptr, howmany, 1, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
        } else {
            p = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(),
                              buf.data(), buf.data(), sign,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
        }
        plans_.emplace(std::move(key), p);
        return p;
    }

private:
    std::mutex mu_;
    std::map<std::tuple<std::vector<int>, int, bool>, fftw_plan> plans_;
};

void execute(const Grid& grid, ArrayXc& data, int sign, bool horizontal_only = false) {
    fftw_plan p = PlanCache::instance().get(grid.points(), sign, horizontal_only);
    auto* raw = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(p, raw, raw);
}

}  // namespace

void dft_inverse_horizontal(const Grid& grid, ArrayXc& data) {
    execute(grid, data, FFTW_BACKWARD, true);
}

void dft_forward(const Grid& grid, ArrayXc& data) {
    execute(grid, data, FFTW_FORWARD);
    data *= 1.0 / static_cast<Real>(grid.total());
}

void dft_inverse(const Grid& grid, ArrayXc& data) {
    execute(grid, data, FFTW_BACKWARD);
}

ArrayXr to_physical(const SpectralField& f) {
    const Real defect = f.hermitian_defect();
    if (defect > 1e-10)
        throw std::invalid_argument("to_physical: Hermitian symmetry violated, defect = " +
                                    std::to_string(defect));
    ArrayXc work = f.coeffs();
    dft_inverse(f.grid(), work);
    return work.real();
}

SpectralField to_spectral(const ArrayXr& samples, const std::shared_ptr<const Grid>& grid) {
    if (samples.size() != grid->total())
        throw std::invalid_argument("to_spectral: sample count mismatch");
    ArrayXc work = samples.cast<Complex>();
    dft_forward(*grid, work);
    return SpectralField(grid, std::move(work));
}

}  // namespace anslab
