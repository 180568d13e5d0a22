"""Localization of finite categories by fractions, Ind/Pro completions and localized functors."""

__version__ = "0.1.0"
