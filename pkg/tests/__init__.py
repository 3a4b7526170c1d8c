from __future__ import absolute_import
import tests.fixtures  # noqa: F401
