#pragma once

#include <string_view>
#include <vector>

#include "gcrid/corpus.hpp"
#include "gcrid/features.hpp"

namespace gcrid {

// Starter traditional -> simplified pairs. This is deliberately a small
// curated list of high-frequency characters whose two forms differ; users
// with a fuller conversion table can pass their own file. Keys and values
// are disjoint, so conversion is idempotent.
inline const std::vector<std::pair<char32_t, char32_t>>& builtin_script_pairs() {
  static const std::vector<std::pair<char32_t, char32_t>> pairs = {
      {U'邊', U'边'}, {U'罷', U'罢'}, {U'車', U'车'}, {U'門', U'门'},
      {U'過', U'过'}, {U'龍', U'龙'}, {U'馬', U'马'}, {U'貓', U'猫'},
      {U'憑', U'凭'}, {U'萬', U'万'}, {U'愛', U'爱'}, {U'書', U'书'},
      {U'長', U'长'}, {U'東', U'东'}, {U'風', U'风'}, {U'鳥', U'鸟'},
      {U'魚', U'鱼'}, {U'雲', U'云'}, {U'學', U'学'}, {U'寫', U'写'},
      {U'讀', U'读'}, {U'話', U'话'}, {U'語', U'语'}, {U'說', U'说'},
      {U'請', U'请'}, {U'謝', U'谢'}, {U'錢', U'钱'}, {U'銀', U'银'},
      {U'鐵', U'铁'}, {U'鋼', U'钢'}, {U'飛', U'飞'}, {U'機', U'机'},
      {U'場', U'场'}, {U'廣', U'广'}, {U'應', U'应'}, {U'聽', U'听'},
      {U'觀', U'观'}, {U'歡', U'欢'}, {U'樂', U'乐'}, {U'樣', U'样'},
      {U'買', U'买'}, {U'賣', U'卖'}, {U'貴', U'贵'}, {U'資', U'资'},
      {U'質', U'质'}, {U'體', U'体'}, {U'點', U'点'}, {U'認', U'认'},
      {U'識', U'识'}, {U'難', U'难'}, {U'雞', U'鸡'}, {U'漢', U'汉'},
      {U'國', U'国'}, {U'圓', U'圆'}, {U'員', U'员'}, {U'園', U'园'},
      {U'遠', U'远'}, {U'運', U'运'}, {U'動', U'动'}, {U'開', U'开'},
      {U'關', U'关'}, {U'時', U'时'}, {U'間', U'间'}, {U'問', U'问'},
      {U'題', U'题'}, {U'頭', U'头'}, {U'顏', U'颜'}, {U'髮', U'发'},
      {U'電', U'电'}, {U'腦', U'脑'}, {U'視', U'视'}, {U'聞', U'闻'},
      {U'報', U'报'}, {U'紙', U'纸'}, {U'筆', U'笔'}, {U'畫', U'画'},
      {U'數', U'数'}, {U'碼', U'码'}, {U'網', U'网'}, {U'絡', U'络'},
      {U'線', U'线'}, {U'無', U'无'}, {U'務', U'务'}, {U'會', U'会'},
      {U'議', U'议'}, {U'記', U'记'}, {U'憶', U'忆'}, {U'億', U'亿'},
      {U'優', U'优'}, {U'價', U'价'}, {U'臺', U'台'}, {U'灣', U'湾'},
      {U'島', U'岛'}, {U'陸', U'陆'}, {U'區', U'区'}, {U'縣', U'县'},
      {U'鎮', U'镇'}, {U'鄉', U'乡'},
  };
  return pairs;
}

inline ScriptConversionTable builtin_conversion_table() {
  return ScriptConversionTable(builtin_script_pairs());
}

// Starter traditional-character lexicon: exactly the traditional side of
// the builtin conversion pairs.
inline TraditionalCharLexicon builtin_traditional_lexicon() {
  std::u32string chars;
  for (auto [trad, simp] : builtin_script_pairs()) chars.push_back(trad);
  return TraditionalCharLexicon(chars);
}

}  // namespace gcrid
