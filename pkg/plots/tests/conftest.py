import pytest

pytest.importorskip("isingplots", reason="plots package not installed")
