import numpy as np
import pytest


def write_csv(path, comments, header, rows):
    with open(path, "w") as fh:
        for c in comments:
            fh.write(f"# {c}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(str(v) for v in row) + "\n")
    return path


@pytest.fixture
def csv_factory(tmp_path):
    """Builders for small schema-conformant CSVs of every documented kind."""

    def make(kind, name=None):
        path = tmp_path / (name or f"{kind}.csv")
        if kind == "rfscan":
            x = np.linspace(5.0, 10.0, 40)
            y = 0.02 + 0.6 * 0.04 / ((x - 7.8) ** 2 + 0.04)
            return write_csv(path, ["test rf scan"], ["freq_MHz", "p_fraction"], zip(x, y))
        if kind == "rfpeaks":
            rows = [("a", 1, 7.8), ("a", 2, 3.9), ("b", 1, 8.6)]
            return write_csv(path, ["test peaks"], ["channel", "N", "omega_MHz"], rows)
        if kind == "fieldscan":
            x = np.linspace(0.35, 0.43, 30)
            y = 0.2 * 1e-4 / ((x - 0.3807) ** 2 + 1e-4) + 0.1 * 1e-4 / ((x - 0.4113) ** 2 + 1e-4)
            return write_csv(
                path, ["test field scan"],
                ["field_Vcm", "p_fraction", "p_fraction_err"],
                zip(x, y, np.full_like(x, 0.005)),
            )
        if kind == "dynamics":
            t = np.linspace(0.0, 20.0, 50)
            pa = 0.3 * np.sin(0.2 * t) ** 2
            pb = 0.1 * np.sin(0.1 * t) ** 2
            return write_csv(
                path, ["test dynamics"],
                ["time_us", "p_sd", "p_ppa", "p_ppb"],
                zip(t, 1.0 - pa - pb, pa, pb),
            )
        if kind == "pairenergy":
            f = np.linspace(0.0, 0.45, 40)
            return write_csv(
                path, ["test gaps"],
                ["field_Vcm", "W_a_MHz", "W_b_MHz"],
                zip(f, 25.15 - 0.5 * 347.04 * f**2, 25.15 - 0.5 * 297.40 * f**2),
            )
        if kind == "resonances":
            rows = [("a", 25.15, 347.04, 0.3807), ("b", 25.15, 297.40, 0.4113)]
            return write_csv(
                path, ["test constants"],
                ["channel", "W0_MHz", "alpha_MHz_per_Vcm2", "F_res_Vcm"], rows,
            )
        if kind == "spectroscopy":
            rows = []
            for fs in np.linspace(0.0, 0.3, 7):
                w = 25.15 - 0.5 * 347.04 * (fs**2 + 0.5 * 0.08**2)
                rows.append((fs, 0.08, abs(w), 1 if w >= 0 else -1, "a"))
            return write_csv(
                path, ["test points"],
                ["F_S_Vcm", "F_rf_Vcm", "omega_MHz", "N", "channel"], rows,
            )
        if kind == "starkmap":
            rows = [(0.0, 0, -1563.6, "49s1/2"), (0.2, 0, -1563.7, "49s1/2")]
            return write_csv(
                path, ["test map"],
                ["field_Vcm", "level_index", "energy_GHz", "label"], rows,
            )
        raise ValueError(kind)

    return make
