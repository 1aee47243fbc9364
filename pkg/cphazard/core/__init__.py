"""
核心数值模块：模型模拟、滤波器、闭式解析解、积分与定价
"""
