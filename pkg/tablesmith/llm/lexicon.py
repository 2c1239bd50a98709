"""
Bundled word lists for the template content provider.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Tuple

from tablesmith.schemas.table import Language

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Lexicon:
    keywords: Tuple[str, ...]
    facets: Tuple[str, ...]
    fields: Tuple[str, ...]
    row_labels: Tuple[str, ...]
    groups: Tuple[str, ...]
    text_values: Tuple[str, ...]
    units: Tuple[str, ...]
    joiner: str = " "

    def topic_phrase(self, keyword: str, facet: str) -> str:
        return f"{keyword}{self.joiner}{facet}"


TELECOM_EN = Lexicon(
    keywords=(
        "5G", "optical fiber", "telecommunications", "operator", "base station",
        "backbone network", "gigabit", "data center", "FTTR", "quality of service",
        "roaming", "value-added services", "service hall", "network access",
        "voice services", "broadband", "cloud computing", "local area network",
        "Internet of Things", "gateway services", "ring back tone", "network security",
        "Wi-Fi", "core network", "network coverage", "access network",
        "network optimization", "customer relationship management", "IPTV",
        "5G plans", "data pricing", "VoLTE", "plan pricing",
    ),
    facets=(
        "pricing overview", "regional rollout", "quarterly usage", "service levels",
        "subscriber statistics", "maintenance schedule", "capacity planning",
        "tariff comparison", "fault report", "procurement list",
    ),
    fields=(
        "Package", "Monthly Fee", "Data Allowance", "Voice Minutes", "Region",
        "Coverage Rate", "Subscribers", "Bandwidth", "Latency", "Contract Term",
        "Provider", "Status", "Uptime", "Sites", "Revenue", "Growth", "Device",
        "Speed Tier", "Support Level", "Launch Date",
    ),
    row_labels=(
        "North", "South", "East", "West", "Central", "Urban", "Rural", "Enterprise",
        "Residential", "Q1", "Q2", "Q3", "Q4", "Basic", "Standard", "Premium",
    ),
    groups=("Service Details", "Network Metrics", "Pricing", "Usage", "Coverage", "Customer Data"),
    text_values=(
        "Unlimited", "Family Share", "Business Pro", "Prepaid Lite", "Active",
        "Under Review", "Scheduled", "Fiber Home", "Metro Ring", "Gold Support",
        "Silver Support", "Dual SIM", "Roaming Pack", "Night Owl", "Student Saver",
        "Standby", "Completed", "Pending", "Mesh Router", "Smart Gateway",
    ),
    units=("GB", "Mbps", "ms", "%", "USD", "min", "sites"),
)

TELECOM_ZH = Lexicon(
    keywords=(
        "5G", "光纤", "电信", "运营商", "基站", "骨干网", "千兆", "数据中心", "FTTR",
        "服务质量", "漫游", "增值业务", "营业厅", "网络接入", "语音业务", "宽带",
        "云计算", "局域网", "物联网", "网关业务", "彩铃", "网络安全", "无线网络",
        "核心网", "网络覆盖", "接入网", "网络优化", "客户关系管理", "IPTV",
        "5G套餐", "流量资费", "VoLTE", "套餐资费",
    ),
    facets=(
        "资费一览", "区域部署", "季度用量", "服务等级", "用户统计", "维护计划",
        "容量规划", "资费对比", "故障报告", "采购清单",
    ),
    fields=(
        "套餐名称", "月费", "流量", "通话分钟", "地区", "覆盖率", "用户数", "带宽",
        "时延", "合约期", "运营商", "状态", "可用率", "站点数", "收入", "增长率",
        "终端", "速率档位", "服务级别", "上线日期",
    ),
    row_labels=("华北", "华南", "华东", "西部", "中部", "城区", "农村", "政企", "家庭",
                "一季度", "二季度", "三季度", "四季度", "基础版", "标准版", "尊享版"),
    groups=("业务信息", "网络指标", "资费", "用量", "覆盖情况", "客户数据"),
    text_values=(
        "畅享套餐", "亲情共享", "商务专享", "预付费轻享", "正常", "审核中", "已排期",
        "全屋光纤", "城域环网", "金牌服务", "银牌服务", "双卡双待", "漫游包", "夜间流量",
        "校园套餐", "待机", "已完成", "处理中", "智能组网", "智慧网关",
    ),
    units=("GB", "Mbps", "毫秒", "%", "元", "分钟", "个"),
    joiner="",
)

GENERIC_EN = Lexicon(
    keywords=("sales", "inventory", "staffing", "budget", "logistics", "customer service",
              "procurement", "training", "facilities", "marketing"),
    facets=("summary", "by region", "quarterly review", "annual plan", "status report",
            "comparison", "forecast", "checklist"),
    fields=("Item", "Amount", "Quantity", "Region", "Owner", "Status", "Rate", "Total",
            "Category", "Score", "Cost", "Target", "Period", "Notes"),
    row_labels=("North", "South", "East", "West", "Q1", "Q2", "Q3", "Q4", "Team A", "Team B"),
    groups=("Overview", "Figures", "Details", "Results"),
    text_values=("Approved", "Pending", "Closed", "Open", "High", "Medium", "Low", "Ongoing",
                 "Planned", "Deferred", "On Track", "At Risk"),
    units=("%", "USD", "units", "h", "kg"),
)

GENERIC_ZH = Lexicon(
    keywords=("销售", "库存", "人员", "预算", "物流", "客户服务", "采购", "培训", "设施", "市场"),
    facets=("汇总", "分区统计", "季度回顾", "年度计划", "状态报告", "对比", "预测", "清单"),
    fields=("项目", "金额", "数量", "地区", "负责人", "状态", "比率", "合计", "类别", "得分",
            "成本", "目标", "周期", "备注"),
    row_labels=("华北", "华南", "华东", "西部", "一季度", "二季度", "三季度", "四季度", "甲组", "乙组"),
    groups=("概况", "数据", "明细", "结果"),
    text_values=("已批准", "待处理", "已关闭", "进行中", "高", "中", "低", "持续", "计划中",
                 "已延期", "正常推进", "存在风险"),
    units=("%", "元", "件", "小时", "千克"),
    joiner="",
)

LEXICONS: Dict[Tuple[str, Language], Lexicon] = {
    ("telecommunication", Language.en): TELECOM_EN,
    ("telecommunication", Language.zh): TELECOM_ZH,
}

GENERIC = {Language.en: GENERIC_EN, Language.zh: GENERIC_ZH}

DOMAIN_ALIASES = {"telecom": "telecommunication", "telecommunications": "telecommunication"}


def get_lexicon(domain: str, language: Language) -> Tuple[Lexicon, bool]:
    """
    Lexicon for a domain.

    Returns:
        (lexicon, is_fallback): is_fallback is True when the generic lists
        stand in for an unknown domain
    """
    key = DOMAIN_ALIASES.get(domain.strip().lower(), domain.strip().lower())
    lexicon = LEXICONS.get((key, Language(language)))
    if lexicon is None:
        logger.warning(f"No lexicon for domain={domain!r}, language={Language(language).value}; using generic words")
        return GENERIC[Language(language)], True
    return lexicon, False
