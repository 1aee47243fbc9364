"""共享测试 fixtures。"""

from pathlib import Path

import pytest

from cphazard.config.configs import RunConfig
from cphazard.models.params import ModelParams, new_params


@pytest.fixture
def table2_params() -> ModelParams:
    """国债校准参数（非退化，κ < 0）。"""
    return new_params(pi0=0.0, lam=0.25, mu1=0.0366, mu2=0.1148, beta=0.15)


@pytest.fixture
def table1_params() -> ModelParams:
    """滤波比较实验参数。"""
    return new_params(pi0=0.0, lam=0.06, mu1=0.02, mu2=0.22, beta=1.0)


@pytest.fixture
def degenerate_params() -> ModelParams:
    """μ2 = μ1 + λ 的退化参数。"""
    return new_params(pi0=0.0, lam=0.25, mu1=0.0366, mu2=0.2866, beta=0.15)


@pytest.fixture
def temp_workspace(tmp_path: Path) -> Path:
    """基于 tmp_path 的临时工作目录。"""
    workspace = tmp_path / "workspace"
    workspace.mkdir()
    return workspace


@pytest.fixture
def run_config(temp_workspace: Path) -> RunConfig:
    """输出到临时目录、步长较粗的默认配置。"""
    config = RunConfig()
    config.output_dir = str(temp_workspace / "output")
    config.run.dt = 1e-2
    return config


@pytest.fixture
def steep_params() -> ModelParams:
    """μ1 ≪ μ2，变点后 Π^G 很快贴近上界。"""
    return new_params(pi0=0.0, lam=0.25, mu1=1e-5, mu2=1.0, beta=0.15)
