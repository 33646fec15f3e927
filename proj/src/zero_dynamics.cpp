#include "rdlwe/zero_dynamics.hpp"

#include "rdlwe/errors.hpp"

namespace rdlwe {

SystemZq::SystemZq(ZqMatrix f, ZqMatrix g, ZqMatrix h, u64 j)
    : F(std::move(f)), G(std::move(g)), H(std::move(h)), J(j) {
    const std::size_t n = F.rows();
    if (F.cols() != n) throw DimensionMismatch("state matrix must be square");
    if (G.rows() != n || G.cols() != 1) throw DimensionMismatch("input matrix must be n x 1");
    if (H.rows() != 1 || H.cols() != n) throw DimensionMismatch("output matrix must be 1 x n");
    if (F.mod() != G.mod() || F.mod() != H.mod()) throw ModulusMismatch{};
    if (J >= mod().value()) throw Error("feedthrough must be a canonical residue");
}

u64 system_step(const SystemZq& sys, ZqMatrix& state, u64 input) {
    const Modulus& q = sys.mod();
    u64 out = q.add(matmul(sys.H, state).at(0, 0), q.mul(sys.J, input));
    ZqMatrix next = matmul(sys.F, state);
    next += sys.G.scaled(input);
    state = std::move(next);
    return out;
}

std::vector<u64> simulate_outputs(const SystemZq& sys, const ZqMatrix& x0,
                                  const std::vector<u64>& inputs) {
    ZqMatrix state = x0;
    std::vector<u64> outputs;
    outputs.reserve(inputs.size());
    for (u64 y : inputs) outputs.push_back(system_step(sys, state, y));
    return outputs;
}

std::size_t relative_degree(const SystemZq& sys) {
    if (sys.J != 0) return 0;
    ZqMatrix row = sys.H;
    for (std::size_t d = 1; d <= sys.dim(); ++d) {
        if (!matmul(row, sys.G).is_zero()) return d;
        row = matmul(row, sys.F);
    }
    throw NoRelativeDegree{};
}

namespace {

// Rows H, HF, ..., HF^{count-1}.
std::vector<ZqMatrix> markov_rows(const SystemZq& sys, std::size_t count) {
    std::vector<ZqMatrix> rows;
    rows.reserve(count);
    ZqMatrix row = sys.H;
    for (std::size_t i = 0; i < count; ++i) {
        rows.push_back(row);
        row = matmul(row, sys.F);
    }
    return rows;
}

} // namespace

NormalForm build_transform(const SystemZq& sys) {
    const std::size_t n = sys.dim();
    const Modulus q = sys.mod();
    const std::size_t nu = relative_degree(sys);

    if (nu == 0) {
        const u64 jinv = q.inv(sys.J);
        // F - G J^{-1} H drives the equivalent-input generator.
        ZqMatrix closed = sys.F - matmul(sys.G.scaled(jinv), sys.H);
        return NormalForm{0,
                          ZqMatrix::identity(n, q),
                          ZqMatrix(0, n, q),
                          ZqMatrix::identity(n, q),
                          ZqMatrix(n, 0, q),
                          std::move(closed),
                          ZqMatrix(n, 0, q),
                          sys.H,
                          ZqMatrix(1, 0, q),
                          sys.J,
                          sys};
    }

    auto rows = markov_rows(sys, nu);
    ZqMatrix to_chain = vstack(rows, n, q);

    auto kernel = left_kernel_basis(sys.G);
    std::vector<ZqMatrix> partial(rows.begin(), rows.end() - 1); // H F^i, i <= nu-2
    auto completion = extend_to_basis(partial, kernel);
    ZqMatrix to_zd = vstack(completion, n, q);

    // T = [to_zd; to_chain], V = T^{-1}
    ZqMatrix t(n, n, q);
    for (std::size_t i = 0; i < n - nu; ++i)
        for (std::size_t c = 0; c < n; ++c) t.at(i, c) = to_zd.at(i, c);
    for (std::size_t i = 0; i < nu; ++i)
        for (std::size_t c = 0; c < n; ++c) t.at(n - nu + i, c) = to_chain.at(i, c);
    ZqMatrix v = mat_inverse(t);
    ZqMatrix from_zd = v.cols_slice(0, n - nu);
    ZqMatrix from_chain = v.cols_slice(n - nu, n);

    ZqMatrix zd_update = matmul(matmul(to_zd, sys.F), from_zd);
    ZqMatrix zd_drive = matmul(matmul(to_zd, sys.F), from_chain);
    ZqMatrix head = matmul(rows.back(), sys.F); // H F^nu
    ZqMatrix head_from_zd = matmul(head, from_zd);
    ZqMatrix head_from_chain = matmul(head, from_chain);
    u64 gain = matmul(rows.back(), sys.G).at(0, 0);

    // Construction sanity: T V = V T = I and T G = [0; ...; 0; gain].
    if (gain == 0) throw Error("internal: zero input gain after transform");
    ZqMatrix tg = matmul(t, sys.G);
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (tg.at(i, 0) != 0) throw Error("internal: transform does not align the input column");
    if (tg.at(n - 1, 0) != gain) throw Error("internal: transform gain mismatch");

    return NormalForm{nu,
                      std::move(to_zd),
                      std::move(to_chain),
                      std::move(from_zd),
                      std::move(from_chain),
                      std::move(zd_update),
                      std::move(zd_drive),
                      std::move(head_from_zd),
                      std::move(head_from_chain),
                      gain,
                      sys};
}

NormalFormStep normal_form_step(const NormalForm& nf, const ZqMatrix& z, const ZqMatrix& v,
                                u64 input) {
    if (nf.nu == 0) throw Error("normal_form_step requires relative degree >= 1");
    const Modulus& q = nf.mod();
    if (z.rows() != nf.dim() - nf.nu || z.cols() != 1 || v.rows() != nf.nu || v.cols() != 1)
        throw DimensionMismatch("normal-form state shapes do not match");

    ZqMatrix z_next = matmul(nf.zd_update, z);
    z_next += matmul(nf.zd_drive, v);

    ZqMatrix v_next(nf.nu, 1, q);
    for (std::size_t i = 0; i + 1 < nf.nu; ++i) v_next.at(i, 0) = v.at(i + 1, 0);
    u64 head = q.add(matmul(nf.head_from_zd, z).at(0, 0), matmul(nf.head_from_chain, v).at(0, 0));
    v_next.at(nf.nu - 1, 0) = q.add(head, q.mul(nf.input_gain, input));

    return NormalFormStep{std::move(z_next), std::move(v_next), v.at(0, 0)};
}

u64 zero_output_input(const NormalForm& nf, const ZqMatrix& x0, u64 t) {
    const Modulus& q = nf.mod();
    if (!matmul(nf.to_chain, x0).is_zero()) throw NonzeroInitialOutput{};
    ZqMatrix z = matmul(mat_pow(nf.zd_update, t), matmul(nf.to_zd, x0));
    u64 drive = matmul(nf.head_from_zd, z).at(0, 0);
    return q.neg(q.mul(q.inv(nf.input_gain), drive));
}

EquivalentInfo equivalent_info(const NormalForm& nf, const ZqMatrix& x0,
                               const std::vector<u64>& inputs) {
    const Modulus& q = nf.mod();
    const u64 ginv = q.inv(nf.input_gain);
    ZqMatrix v0 = matmul(nf.to_chain, x0);
    ZqMatrix z = matmul(nf.to_zd, x0);
    std::vector<u64> shifted;
    shifted.reserve(inputs.size());
    for (u64 y : inputs) {
        u64 drive = matmul(nf.head_from_zd, z).at(0, 0);
        shifted.push_back(q.add(y, q.mul(ginv, drive)));
        z = matmul(nf.zd_update, z);
    }
    return EquivalentInfo{std::move(v0), std::move(shifted)};
}

EquivalentInfo residue_to_equivalent_input(const NormalForm& nf, const std::vector<u64>& outputs,
                                           std::optional<std::size_t> count) {
    const Modulus& q = nf.mod();
    const std::size_t nu = nf.nu;
    if (outputs.size() < nu) throw InsufficientHistory("need at least nu outputs");
    const std::size_t recoverable = outputs.size() - nu;
    const std::size_t steps = count.value_or(recoverable);
    if (steps > recoverable)
        throw InsufficientHistory("outputs must reach index t + nu for every recovered input");

    const u64 ginv = q.inv(nf.input_gain);
    ZqMatrix v0(nu, 1, q);
    for (std::size_t i = 0; i < nu; ++i) v0.at(i, 0) = outputs[i];

    std::vector<u64> shifted;
    shifted.reserve(steps);

    if (nu == 0) {
        // Invert S(0, .) directly: the driven part of the state is
        // reconstructible from the outputs alone.
        ZqMatrix drive_in = nf.sys.G.scaled(ginv);
        ZqMatrix w(nf.dim(), 1, q);
        for (std::size_t t = 0; t < steps; ++t) {
            u64 seen = matmul(nf.head_from_zd, w).at(0, 0);
            shifted.push_back(q.mul(ginv, q.sub(outputs[t], seen)));
            ZqMatrix w_next = matmul(nf.zd_update, w);
            w_next += drive_in.scaled(outputs[t]);
            w = std::move(w_next);
        }
        return EquivalentInfo{std::move(v0), std::move(shifted)};
    }

    // Driven part of the internal state, accumulated from the chain values.
    ZqMatrix zdriven(nf.dim() - nu, 1, q);
    for (std::size_t t = 0; t < steps; ++t) {
        ZqMatrix chain(nu, 1, q);
        for (std::size_t i = 0; i < nu; ++i) chain.at(i, 0) = outputs[t + i];
        u64 from_chain = matmul(nf.head_from_chain, chain).at(0, 0);
        u64 from_zd = matmul(nf.head_from_zd, zdriven).at(0, 0);
        u64 num = q.sub(q.sub(outputs[t + nu], from_chain), from_zd);
        shifted.push_back(q.mul(ginv, num));
        ZqMatrix z_next = matmul(nf.zd_update, zdriven);
        z_next += matmul(nf.zd_drive, chain);
        zdriven = std::move(z_next);
    }
    return EquivalentInfo{std::move(v0), std::move(shifted)};
}

std::vector<u64> output_record(const SystemZq& sys, const ZqMatrix& x0,
                               const std::vector<u64>& inputs) {
    const std::size_t nu = relative_degree(sys);
    ZqMatrix state = x0;
    std::vector<u64> outputs;
    outputs.reserve(inputs.size() + nu);
    for (u64 y : inputs) outputs.push_back(system_step(sys, state, y));
    // Outputs in the relative-degree window after the horizon cannot be
    // influenced by inputs beyond it, so extending with zero inputs is exact.
    for (std::size_t i = 0; i < nu; ++i) outputs.push_back(system_step(sys, state, 0));
    return outputs;
}

} // namespace rdlwe
