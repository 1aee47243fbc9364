"""
cphazard - 风险率变点模型的模拟、滤波与定价工具包
"""

__version__ = "0.1.0"
__author__ = "cphazard Team"
